//! Seeded random streams.
//!
//! A stream is a ChaCha8 keystream keyed by a 64-bit seed and selected by a
//! 64-bit stream index, so independent substreams never overlap and can be
//! consumed in any order or on any thread.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hermitian::C64;

/// 64-bit multiply-xor-shift finalizer (splitmix64).
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Combines a seed with an index into a new, well-separated seed.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(0x632B_E59B_D9B4_E019)))
}

/// Seed for the grid cell at `(row, col)`.
pub fn cell_seed(master: u64, row: u64, col: u64) -> u64 {
    mix_seed(mix_seed(master, row), col)
}

pub struct SeededStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeededStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    /// Standard normal via Box–Muller; the second variate of each pair is cached.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    /// Circular complex Gaussian with `E|w|² = 1`.
    pub fn complex_gaussian(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.gaussian() * s, self.gaussian() * s)
    }
}
