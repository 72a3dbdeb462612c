//! Seeded random Julia constants for parameter sweeps.
//!
//! The generator is PCG32 (`pcg32` / XSH-RR: a 64-bit linear congruential
//! state with a 32-bit permuted output) as implemented by `rand_pcg::Pcg32`,
//! constructed with `Pcg32::new(seed, 0xa02bdbf7bb3c0a7)`. Each component is
//! drawn from one 64-bit word `w = lo | hi << 32` built from two consecutive
//! 32-bit outputs, mapped to `(w >> 11) · 2⁻⁵³ · 2 − 1 ∈ [−1, 1)`. A constant
//! takes eight consecutive draws: real `s, x, y, z` then dual `s, x, y, z`.

use dqjulia::DualQuaternion;
use rand_core::RngCore;
use rand_pcg::Pcg32;

/// Stream selector passed to `Pcg32::new`.
pub const STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

pub struct SweepRng {
    rng: Pcg32,
}

impl SweepRng {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Pcg32::new(seed, STREAM),
        }
    }

    /// Uniform in `[-1, 1)`.
    pub fn next_component(&mut self) -> f64 {
        let unit = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * unit - 1.0
    }

    pub fn next_constant(&mut self) -> DualQuaternion {
        let mut c = [0.0; 8];
        c.iter_mut().for_each(|v| *v = self.next_component());
        DualQuaternion::from_array(c)
    }
}

/// `sweep_<index>_<r.s>_<r.x>_<r.y>_<r.z>_<d.s>_<d.x>_<d.y>_<d.z>.ppm`, two decimals each.
pub fn sweep_file_name(index: usize, c: &DualQuaternion) -> String {
    let parts: Vec<String> = c.to_array().iter().map(|v| format!("{v:.2}")).collect();
    format!("sweep_{index:03}_{}.ppm", parts.join("_"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_constants() {
        let mut a = SweepRng::new(42);
        let mut b = SweepRng::new(42);
        for _ in 0..20 {
            assert_eq!(a.next_constant(), b.next_constant());
        }
        assert_ne!(
            SweepRng::new(43).next_constant(),
            SweepRng::new(42).next_constant()
        );
    }

    #[test]
    fn components_stay_in_range() {
        let mut rng = SweepRng::new(7);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..10_000 {
            for v in rng.next_constant().to_array() {
                assert!((-1.0..1.0).contains(&v));
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        // the draws actually cover the interval
        assert!(lo < -0.99 && hi > 0.99);
    }

    #[test]
    fn pinned_first_constant() {
        // Frozen from a standalone PCG32 implementation; any change to the
        // PRNG, stream or mapping breaks sweep reproducibility.
        let expected = [
            -0.1638254328809874,
            -0.4677329643405437,
            -0.1816799403355891,
            0.6713800243083425,
            0.9927743326314558,
            -0.19390481630846002,
            0.9439959032576601,
            -0.8829915021106631,
        ];
        let c = SweepRng::new(42).next_constant();
        assert_eq!(c.to_array(), expected);
        assert_eq!(
            sweep_file_name(0, &c),
            "sweep_000_-0.16_-0.47_-0.18_0.67_0.99_-0.19_0.94_-0.88.ppm"
        );
    }

    #[test]
    fn file_name_format() {
        let c = DualQuaternion::from_array([-0.1, 0.8, -0.26, 0.15, -0.23, -0.38, -0.86, 0.64]);
        assert_eq!(
            sweep_file_name(3, &c),
            "sweep_003_-0.10_0.80_-0.26_0.15_-0.23_-0.38_-0.86_0.64.ppm"
        );
    }
}
