//! Reproducible random-number streams.
//!
//! Every stochastic component draws from an [`RngStream`]: a ChaCha12
//! counter-based generator addressed by `(seed, stream)`. ChaCha output is
//! fully specified, so a given `(seed, stream, draw index)` produces the
//! same bits on every platform and every run. Uniform and exponential
//! variates are derived from the raw 64-bit output with fixed arithmetic
//! (53-bit mantissa scaling, inverse CDF), keeping the mapping from bits to
//! samples under this crate's control.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::real::Real;

/// Deterministic random stream owned by exactly one execution strand.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha12Rng,
}

impl RngStream {
    /// Stream 0 for the given seed.
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent substream `stream` of the given seed.
    ///
    /// Substreams of one seed never share output blocks; use one per
    /// logical draw site (e.g. arrivals vs services) so adding draws at
    /// one site does not shift the other.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform variate in the half-open interval [0, 1).
    ///
    /// Top 53 bits of the raw output scaled by 2^-53 (computed in f64,
    /// then narrowed to `R`).
    pub fn uniform<R: Real>(&mut self) -> R {
        let bits = self.next_u64() >> 11;
        R::from_f64(bits as f64 * (1.0 / (1u64 << 53) as f64))
    }

    /// Uniform variate in the half-open interval (0, 1].
    ///
    /// Same construction shifted by one ulp step so that `ln` stays finite.
    pub fn uniform_pos<R: Real>(&mut self) -> R {
        let bits = (self.next_u64() >> 11) + 1;
        R::from_f64(bits as f64 * (1.0 / (1u64 << 53) as f64))
    }

    /// Exponential variate with the given rate, by inverse CDF.
    pub fn exponential<R: Real>(&mut self, rate: R) -> R {
        -self.uniform_pos::<R>().ln() / rate
    }
}
