//! Closed-form estimators: OLS on the true covariate, complete-case and mean
//! substitution.

use alloc::vec::Vec;

use crate::domain::{CensoredDataset, Diagnostics, FitResult, Method};
use crate::error::{Error, Result};
use crate::numerics::{ols_fit, OlsFit};

pub(crate) fn from_ols(method: Method, fit: OlsFit, n_used: usize) -> FitResult {
    FitResult {
        method,
        beta0: fit.beta0,
        beta1: fit.beta1,
        se_beta0: Some(fit.se_beta0),
        se_beta1: Some(fit.se_beta1),
        diagnostics: Diagnostics::closed_form(n_used),
    }
}

/// OLS on the uncensored covariate; only available in simulation.
pub fn fit_oracle(true_x: &[f64], ys: &[f64]) -> Result<FitResult> {
    let fit = ols_fit(true_x, ys)?;
    Ok(from_ols(Method::Oracle, fit, ys.len()))
}

/// OLS on the rows whose covariate was observed.
pub fn fit_complete_case(ds: &CensoredDataset) -> Result<FitResult> {
    if ds.m() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            available: ds.m(),
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = ds.observed().map(|r| (r.v, r.y)).unzip();
    let fit = ols_fit(&xs, &ys)?;
    Ok(from_ols(Method::CompleteCase, fit, ds.m()))
}

/// Censored covariates replaced by the mean of the observed ones, then OLS
/// on every row.
pub fn fit_mean_substitution(ds: &CensoredDataset) -> Result<FitResult> {
    if ds.m() == 0 {
        return Err(Error::UndefinedMean);
    }
    let mean = ds.observed().map(|r| r.v).sum::<f64>() / ds.m() as f64;
    let xs: Vec<f64> = ds
        .records()
        .iter()
        .map(|r| if r.is_observed() { r.v } else { mean })
        .collect();
    let fit = ols_fit(&xs, &ds.ys())?;
    Ok(from_ols(Method::MeanSubstitution, fit, ds.n()))
}
