//! Dense occupancy sampling of the filled set and cube-mesh export.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{ensure, ParamError};
use crate::julia::{membership, SceneParams};
use crate::render::worker_pool;
use crate::vec3::Vec3;

/// Axis-aligned box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub min: Vec3,
    pub max: Vec3,
}

impl Default for Bounds {
    fn default() -> Self {
        Self::cube(1.5)
    }
}

impl Bounds {
    /// `[-half, half]³`
    pub fn cube(half: f64) -> Self {
        Self {
            min: Vec3::splat(-half),
            max: Vec3::splat(half),
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        ensure(
            (0..3).all(|a| self.min[a] < self.max[a]),
            "voxel_bounds",
            || "min must be below max on every axis".into(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VoxelConfig {
    pub resolution: usize,
    pub bounds: Bounds,
}

impl Default for VoxelConfig {
    fn default() -> Self {
        Self {
            resolution: 100,
            bounds: Bounds::default(),
        }
    }
}

impl VoxelConfig {
    pub fn validate(&self) -> Result<(), ParamError> {
        ensure(self.resolution >= 1, "voxel_resolution", || {
            "must be positive".into()
        })?;
        self.bounds.validate()
    }
}

/// `resolution³` booleans, x fastest then y then z.
#[derive(Clone, Debug, PartialEq)]
pub struct VoxelGrid {
    resolution: usize,
    bounds: Bounds,
    occupancy: Vec<bool>,
}

impl VoxelGrid {
    pub fn empty(config: VoxelConfig) -> Self {
        let n = config.resolution;
        Self {
            resolution: n,
            bounds: config.bounds,
            occupancy: vec![false; n * n * n],
        }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.resolution + j) * self.resolution + i
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.occupancy[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, occupied: bool) {
        let idx = self.index(i, j, k);
        self.occupancy[idx] = occupied;
    }

    pub fn cell_size(&self) -> Vec3 {
        let b = self.bounds();
        let n = self.resolution as f64;
        Vec3::new(
            (b.max.x - b.min.x) / n,
            (b.max.y - b.min.y) / n,
            (b.max.z - b.min.z) / n,
        )
    }

    pub fn cell_min(&self, i: usize, j: usize, k: usize) -> Vec3 {
        let b = self.bounds();
        let s = self.cell_size();
        Vec3::new(
            b.min.x + s.x * i as f64,
            b.min.y + s.y * j as f64,
            b.min.z + s.z * k as f64,
        )
    }

    pub fn cell_center(&self, i: usize, j: usize, k: usize) -> Vec3 {
        self.cell_min(i, j, k) + self.cell_size() * 0.5
    }

    /// `(i, j, k)` of every occupied cell in index order.
    pub fn occupied_cells(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.resolution;
        self.occupancy
            .iter()
            .enumerate()
            .filter(|(_, &o)| o)
            .map(move |(idx, _)| (idx % n, (idx / n) % n, idx / (n * n)))
    }
}

/// Marks each cell whose center belongs to the set. Work is split into
/// z-slabs, each written to its own range of the grid.
pub fn voxelize(scene: &SceneParams, config: &VoxelConfig, workers: usize) -> VoxelGrid {
    let mut grid = VoxelGrid::empty(*config);
    let n = grid.resolution;
    let (min, size) = (config.bounds.min, grid.cell_size());
    let half = size * 0.5;
    let slab = |k: usize, cells: &mut [bool]| {
        for j in 0..n {
            for i in 0..n {
                // same arithmetic as `cell_center`
                let center = Vec3::new(
                    min.x + size.x * i as f64 + half.x,
                    min.y + size.y * j as f64 + half.y,
                    min.z + size.z * k as f64 + half.z,
                );
                cells[j * n + i] = membership(center, scene);
            }
        }
    };
    if workers <= 1 {
        grid.occupancy
            .chunks_mut(n * n)
            .enumerate()
            .for_each(|(k, cells)| slab(k, cells));
    } else {
        worker_pool(workers).install(|| {
            grid.occupancy
                .par_chunks_mut(n * n)
                .enumerate()
                .for_each(|(k, cells)| slab(k, cells))
        });
    }
    grid
}

pub fn inside_count(grid: &VoxelGrid) -> usize {
    grid.occupancy.iter().filter(|&&o| o).count()
}

// Corner `c` has offset bits x = c & 1, y = c & 2, z = c & 4.
const CUBE_FACES: [[usize; 3]; 12] = [
    [0, 4, 6],
    [0, 6, 2],
    [1, 3, 7],
    [1, 7, 5],
    [0, 1, 5],
    [0, 5, 4],
    [2, 6, 7],
    [2, 7, 3],
    [0, 2, 3],
    [0, 3, 1],
    [4, 5, 7],
    [4, 7, 6],
];

/// One unshared cube per occupied cell: all `v x y z` lines, then all
/// `f i j k` triangle lines with 1-based indices and outward winding.
pub fn export_mesh(grid: &VoxelGrid) -> String {
    let size = grid.cell_size();
    let cells: Vec<_> = grid.occupied_cells().collect();
    let mut out = String::with_capacity(cells.len() * 8 * 40);
    for &(i, j, k) in &cells {
        let lo = grid.cell_min(i, j, k);
        for corner in 0..8 {
            let p = Vec3::new(
                if corner & 1 != 0 { lo.x + size.x } else { lo.x },
                if corner & 2 != 0 { lo.y + size.y } else { lo.y },
                if corner & 4 != 0 { lo.z + size.z } else { lo.z },
            );
            writeln!(out, "v {:.6} {:.6} {:.6}", p.x, p.y, p.z).unwrap();
        }
    }
    for cube in 0..cells.len() {
        let base = cube * 8 + 1;
        for [a, b, c] in CUBE_FACES {
            writeln!(out, "f {} {} {}", base + a, base + b, base + c).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{DualQuaternion, Quaternion};

    fn config(resolution: usize) -> VoxelConfig {
        VoxelConfig {
            resolution,
            ..VoxelConfig::default()
        }
    }

    #[test]
    fn huge_constant_gives_empty_grid() {
        let c = DualQuaternion::new(Quaternion::new(10.0, 0.0, 0.0, 0.0), Quaternion::ZERO);
        let grid = voxelize(&SceneParams::new(c), &config(20), 1);
        assert_eq!(inside_count(&grid), 0);
        assert_eq!(export_mesh(&grid), "");
    }

    #[test]
    fn full_grid_count() {
        let mut grid = VoxelGrid::empty(config(4));
        for k in 0..4 {
            for j in 0..4 {
                for i in 0..4 {
                    grid.set(i, j, k, true);
                }
            }
        }
        assert_eq!(inside_count(&grid), 64);
    }

    #[test]
    fn unit_ball_volume_for_zero_constant() {
        let grid = voxelize(&SceneParams::default(), &config(50), 1);
        let expected = 4.0 * std::f64::consts::PI / 3.0 / 27.0;
        let fraction = inside_count(&grid) as f64 / 50f64.powi(3);
        assert!((fraction - expected).abs() / expected < 0.10, "{fraction}");
    }

    #[test]
    fn x_fastest_ordering() {
        let mut grid = VoxelGrid::empty(config(3));
        grid.set(1, 0, 0, true);
        grid.set(0, 1, 0, true);
        grid.set(0, 0, 1, true);
        let idx: Vec<_> = grid
            .occupancy()
            .iter()
            .enumerate()
            .filter(|(_, &o)| o)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(idx, [1, 3, 9]);
        assert_eq!(
            grid.occupied_cells().collect::<Vec<_>>(),
            [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        );
        assert_eq!(grid.cell_center(0, 0, 0), Vec3::splat(-1.0));
    }

    #[test]
    fn single_cell_mesh() {
        let mut grid = VoxelGrid::empty(config(3));
        grid.set(1, 1, 1, true);
        let mesh = export_mesh(&grid);
        let vertices: Vec<_> = mesh.lines().filter(|l| l.starts_with("v ")).collect();
        let faces: Vec<_> = mesh.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(vertices.len(), 8);
        assert_eq!(faces.len(), 12);
        assert_eq!(mesh.lines().count(), 20);
        assert_eq!(vertices[0], "v -0.500000 -0.500000 -0.500000");
        assert_eq!(vertices[7], "v 0.500000 0.500000 0.500000");
        assert_eq!(faces[0], "f 1 5 7");
        assert_eq!(mesh, export_mesh(&grid.clone()));
    }

    #[test]
    fn cube_faces_wind_outward() {
        let corner =
            |c: usize| Vec3::new((c & 1) as f64, ((c >> 1) & 1) as f64, ((c >> 2) & 1) as f64);
        let center = Vec3::splat(0.5);
        for [a, b, c] in CUBE_FACES {
            let (pa, pb, pc) = (corner(a), corner(b), corner(c));
            let normal = (pb - pa).cross(pc - pa);
            let centroid = (pa + pb + pc) * (1.0 / 3.0);
            assert!(normal.dot(centroid - center) > 0.0, "face {a} {b} {c}");
        }
    }

    #[test]
    fn workers_do_not_change_grid() {
        let scene = SceneParams::new(DualQuaternion::from_array([
            -0.39054, -0.58679, 0.0, 0.0, 0.0, 0.5632, 0.0, 0.05,
        ]));
        let one = voxelize(&scene, &config(24), 1);
        assert_eq!(one, voxelize(&scene, &config(24), 3));
        assert_eq!(one, voxelize(&scene, &config(24), 8));
    }

    #[test]
    fn bounds_validation() {
        let bad = VoxelConfig {
            resolution: 4,
            bounds: Bounds {
                min: Vec3::new(0.0, 0.0, 1.0),
                max: Vec3::new(1.0, 1.0, 1.0),
            },
        };
        assert_eq!(bad.validate().unwrap_err().field, "voxel_bounds");
        assert_eq!(config(0).validate().unwrap_err().field, "voxel_resolution");
    }
}
