//! Counter-based random streams.
//!
//! Output number `k` of stream `(seed, stream_id)` is a keyed hash of `k`, so
//! a stream can be recreated anywhere from its two identifiers and no state is
//! ever shared between Monte Carlo workers. Everything is integer arithmetic
//! plus `libm`, which keeps draws identical across platforms.

use crate::error::{Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    key0: u64,
    key1: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let key0 = mix64(seed.wrapping_add(GOLDEN));
        let key1 = mix64(stream_id ^ 0xD1B5_4A32_D192_ED03).wrapping_add(key0.rotate_left(17));
        Self {
            seed,
            stream_id,
            key0,
            key1,
            counter: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 64-bit outputs consumed so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    /// An independent stream with the same `stream_id`, keyed by `tag`.
    pub fn substream(&self, tag: u64) -> RngStream {
        RngStream::new(
            mix64(self.seed ^ mix64(tag.wrapping_mul(GOLDEN))),
            self.stream_id,
        )
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let c = self.counter;
        self.counter = self.counter.wrapping_add(1);
        mix64(mix64(c.wrapping_mul(GOLDEN) ^ self.key0) ^ self.key1)
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform index in `0..n`; `n` must be positive.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        let i = (self.uniform() * n as f64) as usize;
        i.min(n - 1)
    }
}

/// Inverse-transform Weibull draw for a given uniform `u`.
#[inline]
pub fn weibull_from_uniform(shape: f64, scale: f64, u: f64) -> f64 {
    scale * libm::pow(-libm::log(u), 1.0 / shape)
}

/// Weibull(shape, scale) draw, `scale * (-ln U)^(1/shape)`.
pub fn sample_weibull(shape: f64, scale: f64, rng: &mut RngStream) -> Result<f64> {
    if !(shape > 0.0) || !(scale > 0.0) || !shape.is_finite() || !scale.is_finite() {
        return Err(Error::Parameter("Weibull shape and scale must be positive"));
    }
    Ok(weibull_from_uniform(shape, scale, rng.uniform()))
}

/// Normal draw via Box-Muller; always consumes two uniforms.
pub fn sample_normal(mean: f64, sd: f64, rng: &mut RngStream) -> Result<f64> {
    if !(sd >= 0.0) || !sd.is_finite() || !mean.is_finite() {
        return Err(Error::Parameter("normal sd must be non-negative"));
    }
    let u1 = rng.uniform();
    let u2 = rng.uniform();
    let z = libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2);
    Ok(mean + sd * z)
}
