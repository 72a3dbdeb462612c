//! Command-line front end: configuration, the render / voxel / sweep run
//! modes and the seeded sweep generator.

pub mod config;
pub mod run;
pub mod sweep;

pub use config::{parse_config, parse_config_with_env, ConfigError, Invocation, Mode, RunConfig};
pub use dqjulia::{encode_ppm, write_ppm, ImageBuffer};
pub use run::{run, run_render, run_sweep, run_voxel};
