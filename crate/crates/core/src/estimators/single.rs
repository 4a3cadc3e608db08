//! Kaplan-Meier conditional-mean single imputation with bootstrap standard
//! errors.

use alloc::vec::Vec;

use crate::domain::{CensoredDataset, Diagnostics, FitResult, Method};
use crate::error::{Error, Result};
use crate::estimators::impute::impute_km_mean;
use crate::numerics::{ols_fit, OlsFit, RngStream};

/// Consecutive unusable resamples tolerated before giving up.
pub const MAX_REDRAWS: usize = 100;

fn point_fit(ds: &CensoredDataset) -> Result<OlsFit> {
    let imp = impute_km_mean(ds)?;
    ols_fit(&imp.xs, &ds.ys())
}

fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    libm::sqrt(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0))
}

/// OLS after conditional-mean imputation. Standard errors are bootstrap
/// SDs over `bootstrap_b` resamples, each re-imputed from its own curve.
pub fn fit_conditional_single(
    ds: &CensoredDataset,
    bootstrap_b: usize,
    rng: &mut RngStream,
) -> Result<FitResult> {
    if bootstrap_b == 0 {
        return Err(Error::Usage("bootstrap_b must be at least 1"));
    }
    let point = point_fit(ds)?;
    let n = ds.n();
    let mut b0s = Vec::with_capacity(bootstrap_b);
    let mut b1s = Vec::with_capacity(bootstrap_b);
    let mut rows = alloc::vec![0usize; n];
    while b1s.len() < bootstrap_b {
        let mut attempts = 0;
        let fit = loop {
            if attempts == MAX_REDRAWS {
                return Err(Error::ResampleFailure { attempts });
            }
            attempts += 1;
            rows.iter_mut().for_each(|r| *r = rng.index(n));
            let sample = ds.subset(&rows);
            if sample.m() < 3 {
                continue;
            }
            if let Ok(fit) = point_fit(&sample) {
                break fit;
            }
        };
        b0s.push(fit.beta0);
        b1s.push(fit.beta1);
    }
    // One resample gives no spread; fall back to the model SE.
    let (se0, se1) = if bootstrap_b >= 2 {
        (sample_sd(&b0s), sample_sd(&b1s))
    } else {
        (point.se_beta0, point.se_beta1)
    };
    Ok(FitResult {
        method: Method::CondSingle,
        beta0: point.beta0,
        beta1: point.beta1,
        se_beta0: Some(se0),
        se_beta1: Some(se1),
        diagnostics: Diagnostics::closed_form(n),
    })
}
