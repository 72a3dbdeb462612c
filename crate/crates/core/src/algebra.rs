//! Quaternion and dual-quaternion arithmetic.
//!
//! Quaternions are stored scalar-first as `(s, x, y, z)`. A dual quaternion
//! `q_r + q_d ε` is a pair of quaternions with the nilpotent unit `ε² = 0`
//! implied by the product rule rather than stored.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A quaternion `s + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(s: f64, x: f64, y: f64, z: f64) -> Self {
        Self { s, x, y, z }
    }

    pub const fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.s, self.x, self.y, self.z]
    }

    /// Multiplies every component by `k`.
    #[inline]
    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.s, k * self.x, k * self.y, k * self.z)
    }

    #[inline]
    pub fn conjugate(self) -> Self {
        Self::new(self.s, -self.x, -self.y, -self.z)
    }

    /// Four-component Euclidean dot product.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.s * other.s + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Hamilton product `[s1 s2 - v1·v2, s1 v2 + s2 v1 + v1 × v2]`.
    #[inline]
    pub fn mul_hamilton(self, rhs: Self) -> Self {
        let (a, b) = (self, rhs);
        Self::new(
            a.s * b.s - (a.x * b.x + a.y * b.y + a.z * b.z),
            (a.s * b.x + b.s * a.x) + (a.y * b.z - a.z * b.y),
            (a.s * b.y + b.s * a.y) + (a.z * b.x - a.x * b.z),
            (a.s * b.z + b.s * a.z) + (a.x * b.y - a.y * b.x),
        )
    }

    /// `q² = (s² - |v|², 2 s v)`.
    ///
    /// Evaluated in the same operation order as [`Quaternion::mul_hamilton`]
    /// so the two agree bit for bit (up to the sign of zero).
    #[inline]
    pub fn square(self) -> Self {
        let Self { s, x, y, z } = self;
        let (sx, sy, sz) = (s * x, s * y, s * z);
        Self::new(s * s - (x * x + y * y + z * z), sx + sx, sy + sy, sz + sz)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.s + rhs.s,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.s - rhs.s,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.s, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.mul_hamilton(rhs)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: Quaternion) -> Quaternion {
        rhs.scale(self)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.s, self.x, self.y, self.z)
    }
}

/// How `ζ²` is formed during Julia iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SquaringMode {
    /// Square the real and dual quaternions independently: `q_r² + q_d² ε`.
    #[default]
    PaperComponentwise,
    /// The true dual-quaternion product `ζ ζ = q_r² + (q_r q_d + q_d q_r) ε`.
    CliffordExact,
}

/// A dual quaternion `real + dual ε`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DualQuaternion {
    pub real: Quaternion,
    pub dual: Quaternion,
}

impl DualQuaternion {
    pub const ZERO: Self = Self::new(Quaternion::ZERO, Quaternion::ZERO);
    pub const ONE: Self = Self::new(Quaternion::ONE, Quaternion::ZERO);

    pub const fn new(real: Quaternion, dual: Quaternion) -> Self {
        Self { real, dual }
    }

    /// Builds from eight components: real `(s,x,y,z)` then dual `(s,x,y,z)`.
    pub const fn from_array(c: [f64; 8]) -> Self {
        Self::new(
            Quaternion::new(c[0], c[1], c[2], c[3]),
            Quaternion::new(c[4], c[5], c[6], c[7]),
        )
    }

    pub const fn to_array(self) -> [f64; 8] {
        let (r, d) = (self.real, self.dual);
        [r.s, r.x, r.y, r.z, d.s, d.x, d.y, d.z]
    }

    #[inline]
    pub fn scale(self, k: f64) -> Self {
        Self::new(self.real.scale(k), self.dual.scale(k))
    }

    #[inline]
    pub fn conjugate(self) -> Self {
        Self::new(self.real.conjugate(), self.dual.conjugate())
    }

    /// Clifford product; the `q_d1 q_d2 ε²` term vanishes.
    #[inline]
    pub fn mul_clifford(self, rhs: Self) -> Self {
        Self::new(
            self.real * rhs.real,
            self.real * rhs.dual + self.dual * rhs.real,
        )
    }

    #[inline]
    pub fn square(self, mode: SquaringMode) -> Self {
        match mode {
            SquaringMode::PaperComponentwise => Self::new(self.real.square(), self.dual.square()),
            SquaringMode::CliffordExact => self.mul_clifford(self),
        }
    }

    /// Sum of squares of all eight components.
    #[inline]
    pub fn magnitude_squared(self) -> f64 {
        self.real.norm_squared() + self.dual.norm_squared()
    }

    /// Eight-component Euclidean norm, the scalar used for escape testing.
    #[inline]
    pub fn magnitude(self) -> f64 {
        self.magnitude_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.real.is_finite() && self.dual.is_finite()
    }
}

impl Add for DualQuaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.real + rhs.real, self.dual + rhs.dual)
    }
}

impl Sub for DualQuaternion {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.real - rhs.real, self.dual - rhs.dual)
    }
}

impl Neg for DualQuaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.real, -self.dual)
    }
}

impl Mul for DualQuaternion {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.mul_clifford(rhs)
    }
}

impl fmt::Display for DualQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.real, self.dual)
    }
}
