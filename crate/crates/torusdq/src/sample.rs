//! Seeded random inputs for property checks: every randomized test in the
//! workspace draws through this module so that a single integer seed
//! reproduces the exact run.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fourier::{FourierElement, LatticeVector};

/// Default half-width of the wave-number box for random supports.
pub const DEFAULT_MAX_WAVE: i64 = 3;

/// A deterministic generator for the given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a random element with at most `modes` modes: each draw picks a
/// lattice vector uniform in the box ‖k‖∞ ≤ max_wave and a coefficient
/// uniform on the complex unit disc; coinciding lattice vectors merge by
/// summation. Exactly `modes·(2n+2)` random values are consumed, so streams
/// stay aligned regardless of duplicate draws.
pub fn random_element(
    rng: &mut impl Rng,
    dim_n: usize,
    modes: usize,
    max_wave: i64,
) -> Result<FourierElement> {
    let mut terms = Vec::with_capacity(modes);
    for _ in 0..modes {
        let k: Vec<i64> = (0..2 * dim_n)
            .map(|_| rng.random_range(-max_wave..=max_wave))
            .collect();
        let radius = rng.random::<f64>().sqrt();
        let angle = 2.0 * std::f64::consts::PI * rng.random::<f64>();
        terms.push((
            LatticeVector::new(k)?,
            Complex64::new(radius * angle.cos(), radius * angle.sin()),
        ));
    }
    FourierElement::from_terms(dim_n, terms)
}
