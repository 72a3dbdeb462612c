//! CPU sphere tracer for the Julia slice: pinhole camera, bounding-sphere
//! culling, distance-estimate stepping, gradient normals and Phong shading.

use rayon::prelude::*;

use crate::error::{ensure, ParamError};
use crate::image::ImageBuffer;
use crate::julia::{distance_estimate, SceneParams};
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ray {
    pub origin: Vec3,
    /// Unit length.
    pub dir: Vec3,
}

impl Ray {
    pub fn new(origin: Vec3, dir: Vec3) -> Self {
        Self {
            origin,
            dir: dir.normalized(),
        }
    }

    #[inline]
    pub fn at(&self, t: f64) -> Vec3 {
        self.origin + self.dir * t
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Camera {
    pub position: Vec3,
    pub look_at: Vec3,
    pub up: Vec3,
    /// Degrees.
    pub vertical_fov: f64,
    pub width: usize,
    pub height: usize,
}

impl Default for Camera {
    fn default() -> Self {
        Self {
            position: Vec3::new(0.0, 0.0, -4.0),
            look_at: Vec3::ZERO,
            up: Vec3::Y,
            vertical_fov: 40.0,
            width: 512,
            height: 512,
        }
    }
}

impl Camera {
    pub fn validate(&self) -> Result<(), ParamError> {
        ensure(self.width > 0, "width", || "must be positive".into())?;
        ensure(self.height > 0, "height", || "must be positive".into())?;
        ensure(
            self.vertical_fov > 0.0 && self.vertical_fov < 180.0,
            "fov",
            || format!("must lie in (0, 180) degrees, got {}", self.vertical_fov),
        )?;
        let forward = self.look_at - self.position;
        ensure(
            forward.length() > 0.0 && forward.is_finite(),
            "look_at",
            || "must differ from the camera position".into(),
        )?;
        ensure(
            forward.normalized().cross(self.up.normalized()).length() > 1e-9,
            "up",
            || "must not be parallel to the view direction".into(),
        )
    }

    /// Pinhole ray through the center of pixel `(px, py)`, origin top-left.
    pub fn generate_ray(&self, px: usize, py: usize) -> Ray {
        let forward = (self.look_at - self.position).normalized();
        let right = forward.cross(self.up).normalized();
        let up = right.cross(forward);
        let half_h = (self.vertical_fov.to_radians() * 0.5).tan();
        let half_w = half_h * self.width as f64 / self.height as f64;
        let u = (2.0 * (px as f64 + 0.5) / self.width as f64 - 1.0) * half_w;
        let v = (1.0 - 2.0 * (py as f64 + 0.5) / self.height as f64) * half_h;
        Ray::new(self.position, forward + right * u + up * v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarchParams {
    pub hit_epsilon: f64,
    pub max_steps: u32,
    pub bounding_sphere_radius: f64,
    pub max_ray_distance: f64,
    /// When false, marching starts at the ray origin and runs to `max_ray_distance`.
    pub use_bounding_sphere: bool,
    /// Central-difference offset for normals.
    pub normal_offset: f64,
}

impl Default for MarchParams {
    fn default() -> Self {
        Self {
            hit_epsilon: 1e-4,
            max_steps: 256,
            bounding_sphere_radius: 3.0,
            max_ray_distance: 100.0,
            use_bounding_sphere: true,
            normal_offset: 1e-3,
        }
    }
}

impl MarchParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        ensure(self.hit_epsilon > 0.0, "epsilon", || {
            "must be positive".into()
        })?;
        ensure(self.max_steps >= 1, "max_steps", || {
            "must be at least 1".into()
        })?;
        ensure(self.bounding_sphere_radius > 0.0, "bounding_radius", || {
            "must be positive".into()
        })?;
        ensure(
            self.hit_epsilon < self.bounding_sphere_radius,
            "epsilon",
            || "must be smaller than the bounding radius".into(),
        )?;
        ensure(self.max_ray_distance > 0.0, "max_ray_distance", || {
            "must be positive".into()
        })?;
        ensure(self.normal_offset > 0.0, "normal_offset", || {
            "must be positive".into()
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Hit {
    pub hit: bool,
    pub point: Vec3,
    pub steps_taken: u32,
    pub distance_along_ray: f64,
    /// The DE gradient vanished and the normal fell back to `-ray.dir`.
    pub degenerate_normal: bool,
}

/// Entry and exit parameters of the origin-centered sphere, `t_near ≥ 0`.
pub fn intersect_bounding_sphere(ray: &Ray, radius: f64) -> Option<(f64, f64)> {
    let b = ray.origin.dot(ray.dir);
    let c = ray.origin.dot(ray.origin) - radius * radius;
    let disc = b * b - c;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let t_far = -b + root;
    if t_far < 0.0 {
        return None;
    }
    Some(((-b - root).max(0.0), t_far))
}

/// One evaluation along a marched ray.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarchStep {
    pub t: f64,
    pub estimate: f64,
}

pub fn ray_march(ray: &Ray, scene: &SceneParams, march: &MarchParams) -> Hit {
    ray_march_inspect(ray, scene, march, |_| {})
}

/// [`ray_march`] reporting every distance evaluation to `on_step`.
pub fn ray_march_inspect(
    ray: &Ray,
    scene: &SceneParams,
    march: &MarchParams,
    mut on_step: impl FnMut(MarchStep),
) -> Hit {
    let (mut t, t_far) = if march.use_bounding_sphere {
        match intersect_bounding_sphere(ray, march.bounding_sphere_radius) {
            Some(span) => span,
            None => return Hit::default(),
        }
    } else {
        (0.0, march.max_ray_distance)
    };
    let t_end = t_far.min(march.max_ray_distance);
    for step in 1..=march.max_steps {
        let p = ray.at(t);
        let estimate = distance_estimate(p, scene);
        on_step(MarchStep { t, estimate });
        if estimate < march.hit_epsilon {
            return Hit {
                hit: true,
                point: p,
                steps_taken: step,
                distance_along_ray: t,
                degenerate_normal: false,
            };
        }
        t += estimate;
        if t > t_end {
            return Hit {
                steps_taken: step,
                distance_along_ray: t,
                ..Hit::default()
            };
        }
    }
    Hit {
        steps_taken: march.max_steps,
        distance_along_ray: t,
        ..Hit::default()
    }
}

/// Normalized central-difference gradient of the distance field at `p`.
///
/// Returns `None` when the gradient is zero or not finite.
pub fn estimate_normal(p: Vec3, scene: &SceneParams, h: f64) -> Option<Vec3> {
    let de = |q: Vec3| distance_estimate(q, scene);
    let axis = |e: Vec3| (de(p + e * h) - de(p - e * h)) / (2.0 * h);
    let g = Vec3::new(axis(Vec3::X), axis(Vec3::Y), axis(Vec3::Z));
    let len = g.length();
    (len > 0.0 && len.is_finite()).then(|| g * (1.0 / len))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Material {
    pub ambient: f64,
    pub diffuse: f64,
    pub specular: f64,
    pub shininess: f64,
    /// Linear RGB in [0, 1]; tints the ambient and diffuse terms.
    pub color: [f64; 3],
}

impl Default for Material {
    fn default() -> Self {
        Self {
            ambient: 0.1,
            diffuse: 0.7,
            specular: 0.2,
            shininess: 10.0,
            color: [0.95, 0.78, 0.55],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Light {
    pub ambient_intensity: f64,
    pub diffuse_intensity: f64,
    pub specular_intensity: f64,
    /// Unit vector pointing toward the light.
    pub direction: Vec3,
}

impl Default for Light {
    fn default() -> Self {
        Self {
            ambient_intensity: 1.0,
            diffuse_intensity: 1.0,
            specular_intensity: 1.0,
            direction: Vec3::new(-0.5, 0.7, -0.6).normalized(),
        }
    }
}

impl Material {
    pub fn validate(&self) -> Result<(), ParamError> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        ensure(unit(self.ambient), "ka", || {
            format!("must lie in [0, 1], got {}", self.ambient)
        })?;
        ensure(unit(self.diffuse), "kd", || {
            format!("must lie in [0, 1], got {}", self.diffuse)
        })?;
        ensure(unit(self.specular), "ks", || {
            format!("must lie in [0, 1], got {}", self.specular)
        })?;
        ensure(self.shininess >= 1.0, "shininess", || {
            format!("must be at least 1, got {}", self.shininess)
        })?;
        ensure(self.color.iter().all(|&c| unit(c)), "color", || {
            "channels must lie in [0, 1]".into()
        })
    }
}

impl Light {
    pub fn validate(&self) -> Result<(), ParamError> {
        let intensities = [
            self.ambient_intensity,
            self.diffuse_intensity,
            self.specular_intensity,
        ];
        ensure(
            intensities.iter().all(|&i| i >= 0.0 && i.is_finite()),
            "light intensity",
            || "intensities must be finite and non-negative".into(),
        )?;
        ensure(
            (self.direction.length() - 1.0).abs() < 1e-9,
            "light_dir",
            || "must be a unit vector".into(),
        )
    }
}

/// Phong terms from the two clamped cosines: `(ambient + diffuse, specular)`.
///
/// `I = k_a I_a + k_d I_d (n·l) + k_s I_s (r·v)^s`; both cosines are clamped
/// to `[0, 1]` and the specular lobe is dropped on faces turned from the light.
pub fn phong_terms(n_dot_l: f64, r_dot_v: f64, material: &Material, light: &Light) -> (f64, f64) {
    let n_dot_l = n_dot_l.clamp(0.0, 1.0);
    let r_dot_v = if n_dot_l > 0.0 {
        r_dot_v.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let base = material.ambient * light.ambient_intensity
        + material.diffuse * light.diffuse_intensity * n_dot_l;
    let spec = material.specular * light.specular_intensity * r_dot_v.powf(material.shininess);
    (base, spec)
}

/// Per-channel intensity in `[0, 1]`, before gamma and quantization.
pub fn shade_phong(
    hit: &Hit,
    normal: Vec3,
    material: &Material,
    light: &Light,
    eye: Vec3,
) -> [f64; 3] {
    let l = light.direction;
    let v = (eye - hit.point).normalized();
    let n_dot_l = normal.dot(l);
    let r = normal * (2.0 * n_dot_l) - l;
    let (base, spec) = phong_terms(n_dot_l, r.dot(v), material, light);
    material.color.map(|c| (c * base + spec).clamp(0.0, 1.0))
}

/// Everything about turning hits into pixels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shading {
    pub material: Material,
    pub light: Light,
    pub background: [u8; 3],
    /// Display gamma applied at quantization; `1.0` leaves values linear.
    pub gamma: f64,
}

impl Default for Shading {
    fn default() -> Self {
        Self {
            material: Material::default(),
            light: Light::default(),
            background: [20, 22, 30],
            gamma: 2.2,
        }
    }
}

impl Shading {
    pub fn validate(&self) -> Result<(), ParamError> {
        self.material.validate()?;
        self.light.validate()?;
        ensure(self.gamma > 0.0 && self.gamma.is_finite(), "gamma", || {
            format!("must be positive, got {}", self.gamma)
        })
    }

    pub fn quantize(&self, linear: [f64; 3]) -> [u8; 3] {
        linear.map(|c| {
            let c = c.clamp(0.0, 1.0);
            let c = if self.gamma == 1.0 {
                c
            } else {
                c.powf(1.0 / self.gamma)
            };
            (c * 255.0).round() as u8
        })
    }
}

/// Outcome of tracing one pixel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PixelSample {
    pub hit: Hit,
    /// Linear shaded color; `None` on a miss.
    pub color: Option<[f64; 3]>,
}

pub fn trace_pixel(
    scene: &SceneParams,
    camera: &Camera,
    march: &MarchParams,
    shading: &Shading,
    px: usize,
    py: usize,
) -> PixelSample {
    let ray = camera.generate_ray(px, py);
    let mut hit = ray_march(&ray, scene, march);
    if !hit.hit {
        return PixelSample { hit, color: None };
    }
    let normal = match estimate_normal(hit.point, scene, march.normal_offset) {
        Some(n) => n,
        None => {
            hit.degenerate_normal = true;
            -ray.dir
        }
    };
    let color = shade_phong(
        &hit,
        normal,
        &shading.material,
        &shading.light,
        camera.position,
    );
    PixelSample {
        hit,
        color: Some(color),
    }
}

/// A rendered raster plus the per-pixel hit mask (row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub image: ImageBuffer,
    pub hit_mask: Vec<bool>,
}

impl Frame {
    pub fn hit_fraction(&self) -> f64 {
        self.hit_mask.iter().filter(|&&h| h).count() as f64 / self.hit_mask.len() as f64
    }
}

/// Renders on `workers` threads. Each row is an independent band written to
/// its own slice of the raster, so the bytes do not depend on `workers`.
pub fn render_frame(
    scene: &SceneParams,
    camera: &Camera,
    march: &MarchParams,
    shading: &Shading,
    workers: usize,
) -> Frame {
    let (w, h) = (camera.width, camera.height);
    let mut pixels = vec![0u8; w * h * 3];
    let mut hit_mask = vec![false; w * h];
    let row = |py: usize, rgb: &mut [u8], mask: &mut [bool]| {
        for px in 0..w {
            let sample = trace_pixel(scene, camera, march, shading, px, py);
            let out = match sample.color {
                Some(c) => shading.quantize(c),
                None => shading.background,
            };
            rgb[px * 3..px * 3 + 3].copy_from_slice(&out);
            mask[px] = sample.hit.hit;
        }
    };
    if workers <= 1 {
        pixels
            .chunks_mut(w * 3)
            .zip(hit_mask.chunks_mut(w))
            .enumerate()
            .for_each(|(py, (rgb, mask))| row(py, rgb, mask));
    } else {
        worker_pool(workers).install(|| {
            pixels
                .par_chunks_mut(w * 3)
                .zip(hit_mask.par_chunks_mut(w))
                .enumerate()
                .for_each(|(py, (rgb, mask))| row(py, rgb, mask))
        });
    }
    Frame {
        image: ImageBuffer::from_raw(w, h, pixels),
        hit_mask,
    }
}

pub(crate) fn worker_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to start worker threads")
}

pub fn render(
    scene: &SceneParams,
    camera: &Camera,
    march: &MarchParams,
    shading: &Shading,
    workers: usize,
) -> ImageBuffer {
    render_frame(scene, camera, march, shading, workers).image
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_camera(w: usize, h: usize) -> Camera {
        Camera {
            width: w,
            height: h,
            ..Camera::default()
        }
    }

    #[test]
    fn center_ray_looks_at_target() {
        let cam = Camera {
            position: Vec3::new(1.0, 2.0, -3.0),
            look_at: Vec3::new(0.0, 0.5, 0.0),
            ..small_camera(33, 21)
        };
        let ray = cam.generate_ray(16, 10);
        let want = (cam.look_at - cam.position).normalized();
        assert_relative_eq!((ray.dir - want).length(), 0.0, epsilon = 1e-12);
        assert_eq!(ray.origin, cam.position);
    }

    #[test]
    fn corner_rays_span_the_field_of_view() {
        let cam = Camera {
            position: Vec3::ZERO,
            look_at: Vec3::Z,
            vertical_fov: 90.0,
            ..small_camera(64, 64)
        };
        let edge = 1.0 - 1.0 / 64.0;
        for (px, py) in [(0, 0), (63, 0), (0, 63), (63, 63)] {
            let d = cam.generate_ray(px, py).dir;
            assert_relative_eq!(d.length(), 1.0, epsilon = 1e-12);
            assert_relative_eq!(d.x.abs() / d.z, edge, epsilon = 1e-12);
            assert_relative_eq!(d.y.abs() / d.z, edge, epsilon = 1e-12);
        }
        // top-left pixel looks up and to screen-left
        let d = cam.generate_ray(0, 0).dir;
        assert!(d.y > 0.0 && d.x > 0.0);
    }

    #[test]
    fn camera_validation() {
        assert!(Camera::default().validate().is_ok());
        let bad = Camera {
            up: Vec3::Z,
            ..Camera::default()
        };
        assert_eq!(bad.validate().unwrap_err().field, "up");
        let bad = Camera {
            vertical_fov: 180.0,
            ..Camera::default()
        };
        assert_eq!(bad.validate().unwrap_err().field, "fov");
        let bad = Camera {
            look_at: Camera::default().position,
            ..Camera::default()
        };
        assert_eq!(bad.validate().unwrap_err().field, "look_at");
    }

    #[test]
    fn bounding_sphere_cases() {
        let axial = Ray::new(Vec3::new(0.0, 0.0, -5.0), Vec3::Z);
        assert_eq!(intersect_bounding_sphere(&axial, 3.0), Some((2.0, 8.0)));
        let offset = Ray::new(Vec3::new(4.0, 0.0, -5.0), Vec3::Z);
        assert_eq!(intersect_bounding_sphere(&offset, 3.0), None);
        let inside = Ray::new(Vec3::new(0.0, 0.0, 1.0), Vec3::Z);
        assert_eq!(intersect_bounding_sphere(&inside, 3.0), Some((0.0, 2.0)));
        let behind = Ray::new(Vec3::new(0.0, 0.0, 5.0), Vec3::Z);
        assert_eq!(intersect_bounding_sphere(&behind, 3.0), None);
    }

    #[test]
    fn march_miss_outside_sphere_takes_no_steps() {
        let ray = Ray::new(Vec3::new(4.0, 0.0, -5.0), Vec3::Z);
        let hit = ray_march(&ray, &SceneParams::default(), &MarchParams::default());
        assert!(!hit.hit);
        assert_eq!(hit.steps_taken, 0);
    }

    #[test]
    fn march_hits_unit_sphere_for_zero_constant() {
        let scene = SceneParams::default();
        let march = MarchParams::default();
        let ray = Ray::new(Vec3::new(0.0, 0.0, -5.0), Vec3::Z);
        let hit = ray_march(&ray, &scene, &march);
        assert!(hit.hit);
        assert!(
            (hit.point - Vec3::new(0.0, 0.0, -1.0)).length() < 5e-3,
            "{:?}",
            hit.point
        );
        assert!(distance_estimate(hit.point, &scene) < march.hit_epsilon);
    }

    #[test]
    fn march_never_steps_past_the_estimate() {
        let scene = SceneParams::new(crate::algebra::DualQuaternion::from_array([
            -0.39054, -0.58679, 0.0, 0.0, 0.0, 0.5632, 0.0, 0.05,
        ]));
        let cam = small_camera(24, 24);
        let march = MarchParams::default();
        for py in 0..24 {
            for px in 0..24 {
                let ray = cam.generate_ray(px, py);
                let mut steps = Vec::new();
                ray_march_inspect(&ray, &scene, &march, |s| steps.push(s));
                for pair in steps.windows(2) {
                    assert!(pair[1].t <= pair[0].t + pair[0].estimate);
                }
            }
        }
    }

    #[test]
    fn normal_on_unit_sphere() {
        let scene = SceneParams::default();
        let ray = Ray::new(Vec3::new(0.0, 0.0, -5.0), Vec3::Z);
        let hit = ray_march(&ray, &scene, &MarchParams::default());
        let n = estimate_normal(hit.point, &scene, 1e-3).unwrap();
        assert!((n - Vec3::new(0.0, 0.0, -1.0)).length() < 1e-2, "{n:?}");
        assert_relative_eq!(n.length(), 1.0, epsilon = 1e-9);
        let flipped = estimate_normal(hit.point, &scene, -1e-3).unwrap();
        assert!((n - flipped).length() < 1e-9);
    }

    #[test]
    fn normal_is_none_deep_inside() {
        assert_eq!(
            estimate_normal(Vec3::ZERO, &SceneParams::default(), 1e-3),
            None
        );
    }

    #[test]
    fn phong_values() {
        let diffuse_only = Material {
            ambient: 0.0,
            diffuse: 1.0,
            specular: 0.0,
            ..Material::default()
        };
        let light = Light::default();
        assert_eq!(phong_terms(1.0, 0.3, &diffuse_only, &light), (1.0, 0.0));
        let no_ambient = Material {
            ambient: 0.0,
            ..Material::default()
        };
        assert_eq!(phong_terms(-0.4, 0.9, &no_ambient, &light), (0.0, 0.0));
        assert_eq!(phong_terms(0.0, 0.9, &no_ambient, &light), (0.0, 0.0));
        let spot = Material {
            ambient: 0.1,
            diffuse: 0.7,
            specular: 0.2,
            shininess: 10.0,
            color: [1.0; 3],
        };
        let (base, spec) = phong_terms(0.5, 0.8, &spot, &light);
        assert_relative_eq!(base + spec, 0.471_474_836_48, epsilon = 1e-12);
    }

    #[test]
    fn shade_phong_geometry() {
        let material = Material {
            ambient: 0.1,
            diffuse: 0.7,
            specular: 0.2,
            shininess: 10.0,
            color: [1.0; 3],
        };
        // n·l = 0.5 with l at 60° from n; the eye sits on the reflection ray.
        let n = Vec3::Z;
        let l = Vec3::new(3f64.sqrt() / 2.0, 0.0, 0.5);
        let light = Light {
            direction: l,
            ..Light::default()
        };
        let hit = Hit {
            hit: true,
            ..Hit::default()
        };
        let eye = Vec3::new(-3f64.sqrt() / 2.0, 0.0, 0.5) * 10.0;
        let rgb = shade_phong(&hit, n, &material, &light, eye);
        assert_relative_eq!(rgb[0], 0.1 + 0.35 + 0.2, epsilon = 1e-12);
        assert_eq!(rgb[0], rgb[2]);
    }

    #[test]
    fn quantization() {
        let linear = Shading {
            gamma: 1.0,
            ..Shading::default()
        };
        assert_eq!(linear.quantize([0.0, 1.0, 2.0]), [0, 255, 255]);
        assert_eq!(linear.quantize([-1.0, 0.5, 0.2]), [0, 128, 51]);
        let gamma = Shading::default();
        assert_eq!(
            gamma.quantize([0.5, 0.0, 1.0])[0],
            (0.5f64.powf(1.0 / 2.2) * 255.0).round() as u8
        );
    }

    #[test]
    fn scene_behind_camera_is_background() {
        let cam = Camera {
            position: Vec3::new(0.0, 0.0, -5.0),
            look_at: Vec3::new(0.0, 0.0, -10.0),
            ..small_camera(16, 12)
        };
        let shading = Shading::default();
        let frame = render_frame(
            &SceneParams::default(),
            &cam,
            &MarchParams::default(),
            &shading,
            1,
        );
        assert_eq!(frame.image, ImageBuffer::filled(16, 12, shading.background));
        assert_eq!(frame.hit_fraction(), 0.0);
    }

    #[test]
    fn worker_count_does_not_change_bytes() {
        let scene = SceneParams::new(crate::algebra::DualQuaternion::from_array([
            -0.39054, -0.58679, 0.0, 0.0, 0.0, 0.5632, 0.0, 0.05,
        ]));
        let cam = small_camera(40, 30);
        let m = MarchParams::default();
        let s = Shading::default();
        let one = render(&scene, &cam, &m, &s, 1);
        assert_eq!(one, render(&scene, &cam, &m, &s, 2));
        assert_eq!(one, render(&scene, &cam, &m, &s, 8));
        assert_eq!(one, render(&scene, &cam, &m, &s, 1));
    }
}
