//! Dual-quaternion Julia sets: algebra, escape-time iteration, distance
//! estimation, a tile-parallel CPU sphere tracer and voxel extraction.

pub mod algebra;
pub mod error;
pub mod image;
pub mod julia;
pub mod render;
pub mod vec3;
pub mod voxel;

pub use algebra::{DualQuaternion, Quaternion, SquaringMode};
pub use error::ParamError;
pub use image::{encode_ppm, write_ppm, ImageBuffer};
pub use julia::{
    distance_estimate, iterate_orbit, membership, DistanceEstimator, IterationParams, OrbitResult,
    SceneParams, SliceConfig,
};
pub use render::{
    estimate_normal, intersect_bounding_sphere, ray_march, render, render_frame, shade_phong,
    Camera, Frame, Hit, Light, MarchParams, Material, Ray, Shading,
};
pub use vec3::Vec3;
pub use voxel::{export_mesh, inside_count, voxelize, Bounds, VoxelConfig, VoxelGrid};

/// Constant of the high-detail figure: `(-0.04,0.95,0.4,-0.43)(0.09,-0.35,-0.27,-0.31)`.
pub const HIGH_DETAIL_C: DualQuaternion =
    DualQuaternion::from_array([-0.04, 0.95, 0.4, -0.43, 0.09, -0.35, -0.27, -0.31]);

/// Constant of the second high-detail figure: `(-0.39054,-0.58679,0,0)(0,0.5632,0,0.05)`.
pub const HIGH_DETAIL_C_ALT: DualQuaternion =
    DualQuaternion::from_array([-0.39054, -0.58679, 0.0, 0.0, 0.0, 0.5632, 0.0, 0.05]);
