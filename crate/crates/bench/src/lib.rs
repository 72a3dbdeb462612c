//! Shared fixtures for the criterion benches.

use dqjulia::{Camera, MarchParams, SceneParams, Shading, HIGH_DETAIL_C};

/// The high-detail figure scene at `n = 15`.
pub fn figure_scene() -> SceneParams {
    SceneParams::new(HIGH_DETAIL_C).with_iterations(15)
}

pub fn small_view(size: usize) -> (Camera, MarchParams, Shading) {
    let camera = Camera {
        width: size,
        height: size,
        ..Camera::default()
    };
    (camera, MarchParams::default(), Shading::default())
}
