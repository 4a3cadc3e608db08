//! Standard normal density, distribution function and log distribution
//! function.

use crate::error::{Error, Result};

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;
/// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// Below this the erfc route loses too much to underflow; switch to the
/// continued fraction for the Mills ratio.
const LOG_CDF_TAIL: f64 = -20.0;

fn check(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("normal distribution argument must be finite"))
    }
}

/// Standard normal density.
#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    libm::exp(-0.5 * x * x - LN_SQRT_2PI)
}

#[inline]
pub fn log_std_normal_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Phi(x) without argument checking.
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// 1 - Phi(x), accurate in the upper tail.
#[inline]
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Phi(x) for finite `x`.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    check(x)?;
    Ok(cdf(x))
}

/// ln Phi(x) without argument checking.
///
/// Three regimes: `log1p(-sf)` in the upper tail, `ln(erfc)` in the body and
/// a Mills-ratio continued fraction for `x < -20`, so the result stays finite
/// far past the point where Phi itself underflows.
pub fn log_cdf(x: f64) -> f64 {
    if x > 0.0 {
        libm::log1p(-std_normal_sf(x))
    } else if x > LOG_CDF_TAIL {
        libm::log(cdf(x))
    } else {
        // Phi(x) = phi(x) * R(t), t = -x, R the Mills ratio.
        log_std_normal_pdf(x) + libm::log(mills_ratio(-x))
    }
}

/// ln Phi(x) for finite `x`.
pub fn log_std_normal_cdf(x: f64) -> Result<f64> {
    check(x)?;
    Ok(log_cdf(x))
}

/// Mills ratio `(1 - Phi(t)) / phi(t)` for large positive `t`, by the
/// continued fraction `1/(t+ 1/(t+ 2/(t+ 3/(t+ ...))))` (modified Lentz).
fn mills_ratio(t: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = t;
    let mut c = t;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64;
        d = t + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = t + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}
