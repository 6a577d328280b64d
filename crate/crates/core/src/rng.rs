//! Counter-addressed Gaussian increments.
//!
//! Every trajectory owns a ChaCha8 stream: the key comes from the run seed,
//! the 64-bit stream id is the trajectory index, and step `k` reads keystream
//! words `4k..4k+4` (two u64 draws → one Box–Muller pair). The increments of a
//! trajectory therefore depend only on `(seed, trajectory, step)` and never on
//! scheduling.

use core::f64::consts::TAU;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Domain separation between the one-time and two-time simulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamFamily {
    Bloch,
    Correlation,
}

impl StreamFamily {
    fn tweak(self) -> u64 {
        match self {
            StreamFamily::Bloch => 0,
            StreamFamily::Correlation => 0x9e37_79b9_7f4a_7c15,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IncrementStream {
    rng: ChaCha8Rng,
    sqrt_dt: f64,
}

impl IncrementStream {
    pub fn new(seed: u64, family: StreamFamily, trajectory: u64, dt: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ family.tweak());
        rng.set_stream(trajectory);
        IncrementStream { rng, sqrt_dt: dt.sqrt() }
    }

    /// Repositions the stream at the start of `step`.
    pub fn seek(&mut self, step: u64) {
        self.rng.set_word_pos(4 * u128::from(step));
    }

    /// Next pair of independent standard normals.
    pub fn standard_pair(&mut self) -> (f64, f64) {
        // u1 ∈ (0, 1] keeps the logarithm finite.
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        (r * c, r * s)
    }

    /// Wiener increments (dW_x, dW_z) with variance dt.
    pub fn next_increments(&mut self) -> (f64, f64) {
        let (a, b) = self.standard_pair();
        (a * self.sqrt_dt, b * self.sqrt_dt)
    }
}
