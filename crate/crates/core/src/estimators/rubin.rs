//! Rubin's rules for combining multiply-imputed estimates.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiCombined {
    /// Mean of the per-imputation estimates.
    pub estimate: f64,
    /// Mean of the per-imputation variances.
    pub within_var: f64,
    /// Sample variance of the estimates (m - 1 denominator).
    pub between_var: f64,
    /// `within + (1 + 1/m) between`.
    pub total_var: f64,
    pub m: usize,
    /// Rubin's degrees of freedom, floored at 3. Infinite when the
    /// between-imputation variance is zero.
    pub df: f64,
}

impl MiCombined {
    pub fn se(&self) -> f64 {
        libm::sqrt(self.total_var)
    }
}

/// Combines `m >= 2` estimates and their variances.
pub fn rubin_combine(estimates: &[f64], variances: &[f64]) -> Result<MiCombined> {
    if estimates.len() != variances.len() {
        return Err(Error::Usage("estimates and variances differ in length"));
    }
    let m = estimates.len();
    if m < 2 {
        return Err(Error::Usage("Rubin's rules need at least two imputations"));
    }
    if estimates.iter().chain(variances).any(|v| !v.is_finite()) {
        return Err(Error::Domain("imputation results must be finite"));
    }
    if variances.iter().any(|&v| v < 0.0) {
        return Err(Error::Domain("variances must be non-negative"));
    }
    let mf = m as f64;
    // Averaging offsets from the first estimate keeps identical imputations
    // exactly identical to their mean.
    let base = estimates[0];
    let estimate = base + estimates.iter().map(|e| e - base).sum::<f64>() / mf;
    let within_var = variances.iter().sum::<f64>() / mf;
    let between_var = estimates
        .iter()
        .map(|e| (e - estimate) * (e - estimate))
        .sum::<f64>()
        / (mf - 1.0);
    let inflated = (1.0 + 1.0 / mf) * between_var;
    let total_var = within_var + inflated;
    let df = if inflated > 0.0 {
        let r = within_var / inflated;
        ((mf - 1.0) * (1.0 + r) * (1.0 + r)).max(3.0)
    } else {
        f64::INFINITY
    };
    Ok(MiCombined {
        estimate,
        within_var,
        between_var,
        total_var,
        m,
        df,
    })
}
