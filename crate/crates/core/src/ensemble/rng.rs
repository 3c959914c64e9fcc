//! Counter-based Gaussian streams.
//!
//! Each `(seed, stream)` pair selects an independent ChaCha20 keystream: the
//! 256-bit key is the SplitMix64 expansion of `seed` and the 64-bit stream id
//! is the trial index. Draw `j` of a stream is therefore a fixed function of
//! `(seed, stream, j)`, whatever thread produces it. Uniforms are mapped to
//! normals by the inverse CDF, so no draws are ever rejected.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use statrs::function::erf::erfc_inv;

use super::{CoefficientSample, Ensemble, EnsembleSpec};
use crate::Result;

/// Identifier recorded in every experiment report.
pub const RNG_ALGORITHM_ID: &str =
    "chacha20[key=splitmix64x4(seed),stream=trial_index]/u52-open/inverse-normal-cdf";

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn keyed_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Maps 64 random bits to the open interval `(0, 1)` using the top 52 bits.
pub fn uniform_open(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

pub(crate) fn inverse_normal_cdf(u: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * u)
}

/// Infinite stream of standard normals for `(seed, stream)`.
pub struct GaussianStream {
    rng: ChaCha20Rng,
}

impl GaussianStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self {
            rng: keyed_rng(seed, stream),
        }
    }

    /// Next uniform on `(0, 1)` from the same keystream.
    pub fn next_uniform(&mut self) -> f64 {
        uniform_open(self.rng.next_u64())
    }
}

impl Iterator for GaussianStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(inverse_normal_cdf(self.next_uniform()))
    }
}

pub(crate) fn standard_normals(seed: u64, stream: u64, count: usize) -> Vec<f64> {
    GaussianStream::new(seed, stream).take(count).collect()
}

/// Draws the `n + 1` Gaussian coefficients of trial `trial_index`.
pub fn sample_coefficients(
    spec: EnsembleSpec,
    seed: u64,
    trial_index: u64,
) -> Result<CoefficientSample> {
    Ok(Ensemble::new(spec)?.sample(seed, trial_index))
}
