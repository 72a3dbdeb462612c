//! Run configuration: built-in defaults, an optional `key = value` document,
//! and command-line flags, applied in that order.
//!
//! Every flag `--name` has a matching document key `name`, and
//! [`RunConfig::to_document`] writes all of them back out so a dumped
//! configuration parses to the identical [`RunConfig`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Arg, ArgAction, Command};
use dqjulia::julia::{DistanceEstimator, IterationParams};
use dqjulia::{
    Bounds, Camera, DualQuaternion, Light, MarchParams, Material, ParamError, SceneParams, Shading,
    SliceConfig, SquaringMode, Vec3, VoxelConfig, HIGH_DETAIL_C,
};
use thiserror::Error;

/// Environment variable supplying the default worker count.
pub const WORKERS_ENV: &str = "DQJULIA_WORKERS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("malformed value for {field}: `{value}` ({reason})")]
    Malformed {
        field: String,
        value: String,
        reason: String,
    },
    #[error(transparent)]
    Invalid(#[from] ParamError),
    #[error("config document line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("reading config document {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Cli(#[from] clap::Error),
}

impl ConfigError {
    /// The configuration field the error is about, when there is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Malformed { field, .. } => Some(field),
            ConfigError::Invalid(e) => Some(e.field),
            ConfigError::UnknownKey(k) => Some(k),
            _ => None,
        }
    }
}

fn malformed(field: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Malformed {
        field: field.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Render,
    Voxel,
    Sweep,
}

impl Mode {
    fn default_output(self) -> &'static str {
        match self {
            Mode::Render => "dqjulia.ppm",
            Mode::Voxel => "dqjulia.obj",
            Mode::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Render => "render",
            Mode::Voxel => "voxel",
            Mode::Sweep => "sweep",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "render" => Ok(Mode::Render),
            "voxel" => Ok(Mode::Voxel),
            "sweep" => Ok(Mode::Sweep),
            _ => Err("expected render, voxel or sweep".into()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EstimatorKind {
    #[default]
    Hart,
    Alpha,
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub c: DualQuaternion,
    pub slice: SliceConfig,
    pub iteration: IterationParams,
    pub estimator: EstimatorKind,
    pub alpha: f64,
    pub camera: Camera,
    pub march: MarchParams,
    pub material: Material,
    /// As given; normalized when building [`Shading`].
    pub light: Light,
    pub background: [u8; 3],
    pub gamma: f64,
    pub voxel: VoxelConfig,
    pub seed: u64,
    pub count: usize,
    pub workers: usize,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let shading = Shading::default();
        Self {
            mode: Mode::Render,
            c: HIGH_DETAIL_C,
            slice: SliceConfig::default(),
            iteration: IterationParams::default(),
            estimator: EstimatorKind::Hart,
            alpha: 0.1,
            camera: Camera::default(),
            march: MarchParams::default(),
            material: shading.material,
            light: shading.light,
            background: shading.background,
            gamma: shading.gamma,
            voxel: VoxelConfig::default(),
            seed: 42,
            count: 6,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            output: PathBuf::from(Mode::Render.default_output()),
        }
    }
}

/// Flag/key names with their help text, in document order.
pub const KEYS: &[(&str, &str)] = &[
    ("mode", "run mode: render, voxel or sweep"),
    (
        "c",
        "Julia constant: 8 reals, real part s,x,y,z then dual part s,x,y,z",
    ),
    (
        "slice",
        "5 slice constants then a slot map such as rs-rx-ry",
    ),
    ("iterations", "maximum escape-time iterations"),
    ("escape-radius", "escape (bailout) radius"),
    ("squaring-mode", "componentwise or clifford"),
    ("de", "distance estimator: hart or alpha"),
    ("alpha", "scale of the alpha estimator, in (0, 0.1]"),
    ("width", "image width in pixels"),
    ("height", "image height in pixels"),
    ("camera-pos", "camera position x,y,z"),
    ("look-at", "point the camera looks at x,y,z"),
    ("up", "camera up vector x,y,z"),
    ("fov", "vertical field of view in degrees"),
    ("epsilon", "ray-march hit threshold"),
    ("max-steps", "ray-march step budget"),
    ("bounding-radius", "radius of the culling sphere"),
    ("max-distance", "maximum ray length"),
    ("normal-offset", "central-difference offset for normals"),
    ("ka", "ambient coefficient"),
    ("kd", "diffuse coefficient"),
    ("ks", "specular coefficient"),
    ("shininess", "specular exponent"),
    ("color", "surface color r,g,b in [0, 1]"),
    ("ambient-intensity", "ambient light intensity"),
    ("diffuse-intensity", "diffuse light intensity"),
    ("specular-intensity", "specular light intensity"),
    ("light-dir", "direction toward the light x,y,z"),
    ("background", "background color r,g,b in 0..=255"),
    ("gamma", "display gamma; 1 disables"),
    ("voxel-resolution", "voxel cells per axis"),
    ("voxel-bounds", "voxel box min x,y,z then max x,y,z"),
    ("seed", "sweep seed (u64)"),
    ("count", "number of sweep images"),
    ("workers", "worker threads (default from DQJULIA_WORKERS)"),
    ("output", "output file (render/voxel) or directory (sweep)"),
];

fn parse_num<T: FromStr>(field: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| malformed(field, value, e.to_string()))
}

fn parse_reals<const N: usize>(field: &str, value: &str) -> Result<[f64; N], ConfigError> {
    let parts: Vec<&str> = value.split(',').collect();
    if parts.len() != N {
        return Err(malformed(
            field,
            value,
            format!("expected {N} comma-separated reals"),
        ));
    }
    let mut out = [0.0f64; N];
    for (dst, part) in out.iter_mut().zip(parts) {
        *dst = parse_num(field, part)?;
        if !dst.is_finite() {
            return Err(malformed(field, value, "values must be finite"));
        }
    }
    Ok(out)
}

fn parse_vec3(field: &str, value: &str) -> Result<Vec3, ConfigError> {
    let [x, y, z] = parse_reals::<3>(field, value)?;
    Ok(Vec3::new(x, y, z))
}

fn join<T: fmt::Display>(values: impl IntoIterator<Item = T>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn vec3_str(v: Vec3) -> String {
    join(v.to_array())
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "mode" => {
                self.mode = value
                    .parse()
                    .map_err(|e: String| malformed(key, value, e))?
            }
            "c" => self.c = DualQuaternion::from_array(parse_reals::<8>(key, value)?),
            "slice" => self.slice = value.parse()?,
            "iterations" => self.iteration.max_iterations = parse_num(key, value)?,
            "escape-radius" => self.iteration.escape_radius = parse_num(key, value)?,
            "squaring-mode" => {
                self.iteration.squaring_mode = match value {
                    "componentwise" => SquaringMode::PaperComponentwise,
                    "clifford" => SquaringMode::CliffordExact,
                    _ => return Err(malformed(key, value, "expected componentwise or clifford")),
                }
            }
            "de" => {
                self.estimator = match value {
                    "hart" => EstimatorKind::Hart,
                    "alpha" => EstimatorKind::Alpha,
                    _ => return Err(malformed(key, value, "expected hart or alpha")),
                }
            }
            "alpha" => self.alpha = parse_num(key, value)?,
            "width" => self.camera.width = parse_num(key, value)?,
            "height" => self.camera.height = parse_num(key, value)?,
            "camera-pos" => self.camera.position = parse_vec3(key, value)?,
            "look-at" => self.camera.look_at = parse_vec3(key, value)?,
            "up" => self.camera.up = parse_vec3(key, value)?,
            "fov" => self.camera.vertical_fov = parse_num(key, value)?,
            "epsilon" => self.march.hit_epsilon = parse_num(key, value)?,
            "max-steps" => self.march.max_steps = parse_num(key, value)?,
            "bounding-radius" => self.march.bounding_sphere_radius = parse_num(key, value)?,
            "max-distance" => self.march.max_ray_distance = parse_num(key, value)?,
            "normal-offset" => self.march.normal_offset = parse_num(key, value)?,
            "ka" => self.material.ambient = parse_num(key, value)?,
            "kd" => self.material.diffuse = parse_num(key, value)?,
            "ks" => self.material.specular = parse_num(key, value)?,
            "shininess" => self.material.shininess = parse_num(key, value)?,
            "color" => self.material.color = parse_reals::<3>(key, value)?,
            "ambient-intensity" => self.light.ambient_intensity = parse_num(key, value)?,
            "diffuse-intensity" => self.light.diffuse_intensity = parse_num(key, value)?,
            "specular-intensity" => self.light.specular_intensity = parse_num(key, value)?,
            "light-dir" => self.light.direction = parse_vec3(key, value)?,
            "background" => {
                let parts: Vec<&str> = value.split(',').collect();
                if parts.len() != 3 {
                    return Err(malformed(key, value, "expected three integers 0..=255"));
                }
                for (dst, part) in self.background.iter_mut().zip(parts) {
                    *dst = parse_num(key, part)?;
                }
            }
            "gamma" => self.gamma = parse_num(key, value)?,
            "voxel-resolution" => self.voxel.resolution = parse_num(key, value)?,
            "voxel-bounds" => {
                let b = parse_reals::<6>(key, value)?;
                self.voxel.bounds = Bounds {
                    min: Vec3::new(b[0], b[1], b[2]),
                    max: Vec3::new(b[3], b[4], b[5]),
                };
            }
            "seed" => self.seed = parse_num(key, value)?,
            "count" => self.count = parse_num(key, value)?,
            "workers" => self.workers = parse_num(key, value)?,
            "output" => self.output = PathBuf::from(value),
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Current value of `key` in the syntax [`RunConfig::set`] accepts.
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "mode" => self.mode.to_string(),
            "c" => join(self.c.to_array()),
            "slice" => self.slice.to_string(),
            "iterations" => self.iteration.max_iterations.to_string(),
            "escape-radius" => self.iteration.escape_radius.to_string(),
            "squaring-mode" => match self.iteration.squaring_mode {
                SquaringMode::PaperComponentwise => "componentwise".into(),
                SquaringMode::CliffordExact => "clifford".into(),
            },
            "de" => match self.estimator {
                EstimatorKind::Hart => "hart".into(),
                EstimatorKind::Alpha => "alpha".into(),
            },
            "alpha" => self.alpha.to_string(),
            "width" => self.camera.width.to_string(),
            "height" => self.camera.height.to_string(),
            "camera-pos" => vec3_str(self.camera.position),
            "look-at" => vec3_str(self.camera.look_at),
            "up" => vec3_str(self.camera.up),
            "fov" => self.camera.vertical_fov.to_string(),
            "epsilon" => self.march.hit_epsilon.to_string(),
            "max-steps" => self.march.max_steps.to_string(),
            "bounding-radius" => self.march.bounding_sphere_radius.to_string(),
            "max-distance" => self.march.max_ray_distance.to_string(),
            "normal-offset" => self.march.normal_offset.to_string(),
            "ka" => self.material.ambient.to_string(),
            "kd" => self.material.diffuse.to_string(),
            "ks" => self.material.specular.to_string(),
            "shininess" => self.material.shininess.to_string(),
            "color" => join(self.material.color),
            "ambient-intensity" => self.light.ambient_intensity.to_string(),
            "diffuse-intensity" => self.light.diffuse_intensity.to_string(),
            "specular-intensity" => self.light.specular_intensity.to_string(),
            "light-dir" => vec3_str(self.light.direction),
            "background" => join(self.background),
            "gamma" => self.gamma.to_string(),
            "voxel-resolution" => self.voxel.resolution.to_string(),
            "voxel-bounds" => {
                let b = self.voxel.bounds;
                join(b.min.to_array().into_iter().chain(b.max.to_array()))
            }
            "seed" => self.seed.to_string(),
            "count" => self.count.to_string(),
            "workers" => self.workers.to_string(),
            "output" => self.output.display().to_string(),
            _ => return None,
        })
    }

    /// Every key, one `key = value` line each.
    pub fn to_document(&self) -> String {
        KEYS.iter()
            .map(|(key, _)| format!("{key} = {}\n", self.get(key).expect("listed key")))
            .collect()
    }

    /// Applies a `key = value` document. Blank lines and `#` comments are ignored.
    pub fn apply_document(&mut self, text: &str) -> Result<(), ConfigError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: n + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    /// Defaults overlaid with `text`, then validated.
    pub fn from_document(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self {
            output: PathBuf::new(),
            ..Self::default()
        };
        cfg.apply_document(text)?;
        cfg.finish()
    }

    fn finish(mut self) -> Result<Self, ConfigError> {
        if self.output.as_os_str().is_empty() {
            self.output = PathBuf::from(self.mode.default_output());
        }
        self.validate()?;
        Ok(self)
    }

    pub fn scene(&self) -> SceneParams {
        SceneParams {
            c: self.c,
            slice: self.slice,
            iteration: self.iteration,
            estimator: match self.estimator {
                EstimatorKind::Hart => DistanceEstimator::HartLog,
                EstimatorKind::Alpha => DistanceEstimator::RatioAlpha(self.alpha),
            },
        }
    }

    pub fn shading(&self) -> Shading {
        Shading {
            material: self.material,
            light: Light {
                direction: self.light.direction.normalized(),
                ..self.light
            },
            background: self.background,
            gamma: self.gamma,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.scene().validate()?;
        self.camera.validate()?;
        self.march.validate()?;
        if self.light.direction.length() == 0.0 {
            return Err(ParamError::new("light_dir", "must be non-zero").into());
        }
        self.shading().validate()?;
        self.voxel.validate()?;
        if self.workers == 0 {
            return Err(ParamError::new("workers", "must be at least 1").into());
        }
        if self.mode == Mode::Sweep && self.count == 0 {
            return Err(ParamError::new("count", "must be at least 1 in sweep mode").into());
        }
        if self.output.as_os_str().is_empty() {
            return Err(ParamError::new("output", "must not be empty").into());
        }
        Ok(())
    }
}

/// A parsed command line.
#[derive(Clone, Debug, PartialEq)]
pub struct Invocation {
    pub config: RunConfig,
    /// Print the configuration document instead of running.
    pub dump_config: bool,
}

pub fn command() -> Command {
    let mut cmd = Command::new("dqjulia")
        .about("Render 3D slices of dual-quaternion Julia sets")
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .help("read settings from a key = value document"),
        )
        .arg(
            Arg::new("dump-config")
                .long("dump-config")
                .action(ArgAction::SetTrue)
                .help("print the resolved configuration document and exit"),
        );
    for &(key, help) in KEYS {
        cmd = cmd.arg(
            Arg::new(key)
                .long(key)
                .value_name("VALUE")
                .allow_hyphen_values(true)
                .help(help),
        );
    }
    cmd
}

/// Parses `args` (program name first) with the worker default taken from
/// `DQJULIA_WORKERS`.
pub fn parse_config<I, T>(args: I) -> Result<Invocation, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    parse_config_with_env(args, std::env::var(WORKERS_ENV).ok().as_deref())
}

/// Precedence, lowest first: defaults, `env_workers`, `--config` document, flags.
pub fn parse_config_with_env<I, T>(
    args: I,
    env_workers: Option<&str>,
) -> Result<Invocation, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = command().try_get_matches_from(args)?;
    let mut cfg = RunConfig {
        output: PathBuf::new(),
        ..RunConfig::default()
    };
    if let Some(w) = env_workers {
        cfg.set("workers", w).map_err(|e| match e {
            ConfigError::Malformed { value, reason, .. } => malformed(WORKERS_ENV, &value, reason),
            other => other,
        })?;
    }
    if let Some(path) = matches.get_one::<String>("config") {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: PathBuf::from(path),
            source,
        })?;
        cfg.apply_document(&text)?;
    }
    for &(key, _) in KEYS {
        if let Some(value) = matches.get_one::<String>(key) {
            cfg.set(key, value)?;
        }
    }
    Ok(Invocation {
        config: cfg.finish()?,
        dump_config: matches.get_flag("dump-config"),
    })
}
