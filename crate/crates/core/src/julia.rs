//! Escape-time iteration of `ζ ← ζ² + c` over dual quaternions, the 3D slice
//! embedding, and the scalar distance estimators built on the orbit.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{DualQuaternion, SquaringMode};
use crate::error::{ensure, ParamError};
use crate::vec3::Vec3;

/// Short names of the eight dual-quaternion components, in storage order.
pub const SLOT_NAMES: [&str; 8] = ["rs", "rx", "ry", "rz", "ds", "dx", "dy", "dz"];

/// Which three of the eight components a 3D point drives, plus the constant
/// values held by the other five.
///
/// Constants fill the non-variable slots in increasing slot order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceConfig {
    axes: [usize; 3],
    constants: [f64; 5],
}

impl Default for SliceConfig {
    /// `p` drives the real part's `(s, x, y)`; everything else is zero.
    fn default() -> Self {
        Self {
            axes: [0, 1, 2],
            constants: [0.0; 5],
        }
    }
}

impl SliceConfig {
    pub fn new(axes: [usize; 3], constants: [f64; 5]) -> Result<Self, ParamError> {
        ensure(axes.iter().all(|&a| a < 8), "slice", || {
            format!("slot index out of range in {axes:?}")
        })?;
        ensure(
            axes[0] != axes[1] && axes[0] != axes[2] && axes[1] != axes[2],
            "slice",
            || format!("slots must be distinct, got {axes:?}"),
        )?;
        ensure(constants.iter().all(|c| c.is_finite()), "slice", || {
            "constants must be finite".to_string()
        })?;
        Ok(Self { axes, constants })
    }

    /// Slot indices receiving `p.x`, `p.y`, `p.z`.
    pub fn axes(&self) -> [usize; 3] {
        self.axes
    }

    pub fn constants(&self) -> [f64; 5] {
        self.constants
    }

    /// Parses a map name such as `rs-rx-ry`.
    pub fn parse_axes(name: &str) -> Result<[usize; 3], ParamError> {
        let parts: Vec<&str> = name.split('-').collect();
        ensure(parts.len() == 3, "slice", || {
            format!("map `{name}` must name three slots joined by '-'")
        })?;
        let mut axes = [0; 3];
        for (dst, part) in axes.iter_mut().zip(&parts) {
            *dst = SLOT_NAMES
                .iter()
                .position(|s| s == part)
                .ok_or_else(|| ParamError::new("slice", format!("unknown slot `{part}`")))?;
        }
        Ok(axes)
    }

    pub fn map_name(&self) -> String {
        self.axes.map(|a| SLOT_NAMES[a]).join("-")
    }

    /// Places `p` into the 8D space.
    #[inline]
    pub fn embed(&self, p: Vec3) -> DualQuaternion {
        let mut slots = [0.0; 8];
        let mut is_axis = [false; 8];
        for (i, &a) in self.axes.iter().enumerate() {
            slots[a] = p[i];
            is_axis[a] = true;
        }
        let mut constants = self.constants.iter();
        for (slot, _) in slots.iter_mut().zip(is_axis).filter(|(_, axis)| !axis) {
            *slot = *constants.next().expect("five constant slots");
        }
        DualQuaternion::from_array(slots)
    }
}

impl fmt::Display for SliceConfig {
    /// Five constants followed by the map name, comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.constants {
            write!(f, "{c},")?;
        }
        f.write_str(&self.map_name())
    }
}

impl FromStr for SliceConfig {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, ParamError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        ensure(parts.len() == 6, "slice", || {
            format!("expected five reals and a map name, got `{s}`")
        })?;
        let mut constants = [0.0; 5];
        for (dst, part) in constants.iter_mut().zip(&parts) {
            *dst = part
                .parse()
                .map_err(|_| ParamError::new("slice", format!("malformed number `{part}`")))?;
        }
        Self::new(Self::parse_axes(parts[5])?, constants)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationParams {
    pub max_iterations: u32,
    pub escape_radius: f64,
    pub squaring_mode: SquaringMode,
}

impl Default for IterationParams {
    fn default() -> Self {
        Self {
            max_iterations: 10,
            escape_radius: 4.0,
            squaring_mode: SquaringMode::PaperComponentwise,
        }
    }
}

impl IterationParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        ensure(self.max_iterations >= 1, "max_iterations", || {
            format!("must be at least 1, got {}", self.max_iterations)
        })?;
        ensure(
            self.escape_radius > 1.0 && self.escape_radius.is_finite(),
            "escape_radius",
            || format!("must be a finite value above 1, got {}", self.escape_radius),
        )
    }
}

/// Distance bound formed from the orbit state at the escape step.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum DistanceEstimator {
    /// `0.5 · |ζ| / |ζ'| · ln |ζ|`
    #[default]
    HartLog,
    /// `α · |ζ| / |ζ'|` with `α ∈ (0, 0.1]`.
    RatioAlpha(f64),
}

/// Everything that determines the fractal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SceneParams {
    pub c: DualQuaternion,
    pub slice: SliceConfig,
    pub iteration: IterationParams,
    pub estimator: DistanceEstimator,
}

impl Default for SceneParams {
    fn default() -> Self {
        Self::new(DualQuaternion::ZERO)
    }
}

impl SceneParams {
    /// Default slice, iteration settings and estimator for constant `c`.
    pub fn new(c: DualQuaternion) -> Self {
        Self {
            c,
            slice: SliceConfig::default(),
            iteration: IterationParams::default(),
            estimator: DistanceEstimator::HartLog,
        }
    }

    pub fn with_iterations(mut self, n: u32) -> Self {
        self.iteration.max_iterations = n;
        self
    }

    pub fn with_slice(mut self, slice: SliceConfig) -> Self {
        self.slice = slice;
        self
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        ensure(self.c.is_finite(), "c", || {
            "components must be finite".into()
        })?;
        self.iteration.validate()?;
        if let DistanceEstimator::RatioAlpha(alpha) = self.estimator {
            ensure(alpha > 0.0 && alpha <= 0.1, "alpha", || {
                format!("must lie in (0, 0.1], got {alpha}")
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitResult {
    pub escaped: bool,
    /// Iteration index at escape, or `max_iterations`.
    pub steps: u32,
    pub final_magnitude: f64,
    /// Running scalar derivative `r'`, seeded at 1.
    pub derivative_magnitude: f64,
}

/// Iterates from `z0`, stopping as soon as the magnitude exceeds the escape radius.
pub fn iterate_orbit(z0: DualQuaternion, scene: &SceneParams) -> OrbitResult {
    iterate_orbit_with(z0, scene, |_, _| {})
}

/// As [`iterate_orbit`], calling `visit(n, ζ_n)` for every iterate `n ≥ 1`.
pub fn iterate_orbit_with(
    z0: DualQuaternion,
    scene: &SceneParams,
    mut visit: impl FnMut(u32, DualQuaternion),
) -> OrbitResult {
    let IterationParams {
        max_iterations,
        escape_radius,
        squaring_mode,
    } = scene.iteration;
    let bailout = escape_radius * escape_radius;
    let mut z = z0;
    let mut magnitude = z.magnitude();
    let mut derivative = 1.0;
    for n in 1..=max_iterations {
        derivative *= 2.0 * magnitude;
        z = z.square(squaring_mode) + scene.c;
        // Escape is decided on the squared magnitude.
        let m2 = z.magnitude_squared();
        magnitude = m2.sqrt();
        visit(n, z);
        if m2 > bailout {
            return OrbitResult {
                escaped: true,
                steps: n,
                final_magnitude: magnitude,
                derivative_magnitude: derivative,
            };
        }
    }
    OrbitResult {
        escaped: false,
        steps: max_iterations,
        final_magnitude: magnitude,
        derivative_magnitude: derivative,
    }
}

/// True when the orbit of the embedded point stays bounded.
#[inline]
pub fn membership(p: Vec3, scene: &SceneParams) -> bool {
    !iterate_orbit(scene.slice.embed(p), scene).escaped
}

/// Lower-bound estimate of the distance from `p` to the set; zero for points
/// whose orbit does not escape.
#[inline]
pub fn distance_estimate(p: Vec3, scene: &SceneParams) -> f64 {
    let orbit = iterate_orbit(scene.slice.embed(p), scene);
    if !orbit.escaped {
        return 0.0;
    }
    let ratio = orbit.final_magnitude / orbit.derivative_magnitude;
    let d = match scene.estimator {
        DistanceEstimator::HartLog => 0.5 * ratio * orbit.final_magnitude.ln(),
        DistanceEstimator::RatioAlpha(alpha) => alpha * ratio,
    };
    d.max(0.0)
}
