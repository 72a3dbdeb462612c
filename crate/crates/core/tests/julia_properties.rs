use dqjulia::{
    distance_estimate, membership, voxelize, DualQuaternion, SceneParams, SliceConfig, Vec3,
    VoxelConfig, HIGH_DETAIL_C, HIGH_DETAIL_C_ALT,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain complex escape-time iteration `z ← z² + c`.
fn complex_bounded(z0: (f64, f64), c: (f64, f64), radius: f64, max_iter: u32) -> bool {
    let (mut re, mut im) = z0;
    for _ in 0..max_iter {
        let next_re = re * re - im * im + c.0;
        let next_im = 2.0 * re * im + c.1;
        re = next_re;
        im = next_im;
        if re * re + im * im > radius * radius {
            return false;
        }
    }
    true
}

fn grid_coord(i: usize, n: usize, half: f64) -> f64 {
    -half + 2.0 * half * i as f64 / (n - 1) as f64
}

#[test]
fn complex_slice_matches_complex_iteration() {
    for (a, b) in [
        (-0.8, 0.156),
        (-0.39054, -0.58679),
        (0.285, 0.01),
        (-1.0, 0.0),
    ] {
        let c = DualQuaternion::from_array([a, b, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let slice = SliceConfig::new([0, 1, 2], [0.0; 5]).unwrap();
        let scene = SceneParams::new(c).with_slice(slice);
        let radius = scene.iteration.escape_radius;
        let n = scene.iteration.max_iterations;
        let mut inside = 0;
        for j in 0..256 {
            for i in 0..256 {
                let (x, y) = (grid_coord(i, 256, 1.6), grid_coord(j, 256, 1.6));
                let got = membership(Vec3::new(x, y, 0.0), &scene);
                assert_eq!(
                    got,
                    complex_bounded((x, y), (a, b), radius, n),
                    "c = {a}+{b}i at ({x}, {y})"
                );
                inside += got as usize;
            }
        }
        assert!(inside > 0);
    }
}

#[test]
fn escape_is_permanent_on_grid() {
    let config = VoxelConfig {
        resolution: 64,
        ..VoxelConfig::default()
    };
    for c in [HIGH_DETAIL_C, HIGH_DETAIL_C_ALT] {
        let mut previous = voxelize(&SceneParams::new(c).with_iterations(6), &config, 1);
        for n in 7..=15 {
            let current = voxelize(&SceneParams::new(c).with_iterations(n), &config, 1);
            for (deep, shallow) in current.occupancy().iter().zip(previous.occupancy()) {
                assert!(!deep || *shallow, "n = {n}");
            }
            previous = current;
        }
    }
}

#[test]
fn unit_sphere_boundary_at_grid_resolution() {
    let scene = SceneParams::default().with_iterations(15);
    let n = 128;
    let cell = 3.0 / n as f64;
    let config = VoxelConfig {
        resolution: n,
        ..VoxelConfig::default()
    };
    let grid = voxelize(&scene, &config, 1);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let r = grid.cell_center(i, j, k).length();
                if (r - 1.0).abs() > cell {
                    assert_eq!(grid.get(i, j, k), r < 1.0, "r = {r}");
                }
            }
        }
    }
}

fn check_lower_bound(scene: &SceneParams, seed: u64) -> usize {
    let grid = voxelize(
        scene,
        &VoxelConfig {
            resolution: 96,
            ..VoxelConfig::default()
        },
        1,
    );
    let inside: Vec<Vec3> = grid
        .occupied_cells()
        .map(|(i, j, k)| grid.cell_center(i, j, k))
        .collect();
    assert!(!inside.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut sampled = 0;
    while sampled < 1000 {
        let p = Vec3::new(
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
        );
        if membership(p, scene) {
            continue;
        }
        sampled += 1;
        let nearest = inside
            .iter()
            .map(|q| (*q - p).length())
            .fold(f64::INFINITY, f64::min);
        if distance_estimate(p, scene) > nearest + 1e-3 {
            violations += 1;
        }
    }
    violations
}

#[test]
fn distance_estimate_is_a_lower_bound() {
    for (c, seed) in [
        (DualQuaternion::ZERO, 1),
        (HIGH_DETAIL_C, 2),
        (HIGH_DETAIL_C_ALT, 3),
    ] {
        let scene = SceneParams::new(c);
        assert_eq!(check_lower_bound(&scene, seed), 0, "c = {c}");
    }
}
