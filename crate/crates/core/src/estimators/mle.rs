//! Maximum likelihood under a normal model for the covariate.

use alloc::vec::Vec;

use crate::domain::{CensoredDataset, Diagnostics, FitResult, Method, MleParams};
use crate::error::{Error, Result};
use crate::estimators::loglik::loglik_unchecked;
use crate::numerics::{minimize, numeric_hessian, ols_fit, HessianStep, NelderMeadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MleOptions {
    pub optimizer: NelderMeadOptions,
    pub hessian_step: HessianStep,
}

/// Starting point: complete-case OLS for the regression block, observed
/// mean and SD for the covariate block.
pub fn mle_start(ds: &CensoredDataset) -> Result<MleParams> {
    if ds.m() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            available: ds.m(),
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = ds.observed().map(|r| (r.v, r.y)).unzip();
    let fit = ols_fit(&xs, &ys)?;
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let sd = libm::sqrt(xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0));
    // A perfect complete-case fit would start the optimizer at sigma = 0.
    let sigma = if fit.sigma_hat > 0.0 {
        fit.sigma_hat
    } else {
        1e-3 * sd
    };
    MleParams::new(fit.beta0, fit.beta1, sigma, mean, sd)
}

fn negloglik(ds: &CensoredDataset, theta: &[f64]) -> f64 {
    let p = MleParams::from_unconstrained(theta);
    if !(p.sigma > 0.0 && p.sigma_x > 0.0 && p.sigma.is_finite() && p.sigma_x.is_finite()) {
        return f64::INFINITY;
    }
    -loglik_unchecked(&p, ds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MleFit {
    pub result: FitResult,
    pub params: MleParams,
    pub start_loglik: f64,
}

/// Full MLE output including the nuisance parameters.
pub fn fit_mle_detailed(ds: &CensoredDataset, options: &MleOptions) -> Result<MleFit> {
    let start = mle_start(ds)?;
    let theta0 = start.to_unconstrained();
    let objective = |theta: &[f64]| negloglik(ds, theta);
    let start_loglik = -objective(&theta0);
    let opt = minimize(objective, &theta0, options.optimizer)?;
    let params = MleParams::from_unconstrained(&opt.x_min);

    let (se_beta0, se_beta1) = match numeric_hessian(objective, &opt.x_min, options.hessian_step)
        .ok()
        .and_then(|h| h.inverse_spd())
    {
        Some(cov) if cov.get(0, 0) > 0.0 && cov.get(1, 1) > 0.0 => (
            Some(libm::sqrt(cov.get(0, 0))),
            Some(libm::sqrt(cov.get(1, 1))),
        ),
        _ => (None, None),
    };

    Ok(MleFit {
        result: FitResult {
            method: Method::Mle,
            beta0: params.beta0,
            beta1: params.beta1,
            se_beta0,
            se_beta1,
            diagnostics: Diagnostics {
                converged: opt.converged,
                iterations: opt.iterations,
                loglik: Some(-opt.f_min),
                n_used: ds.n(),
                fallback: false,
                mi: None,
            },
        },
        params,
        start_loglik,
    })
}

/// Maximizes the censored log-likelihood in `(b0, b1, ln s, mu_x, ln s_x)`.
///
/// Non-convergence is reported through the diagnostics; a Hessian that is
/// not positive definite leaves both standard errors empty.
pub fn fit_mle(ds: &CensoredDataset, options: &MleOptions) -> Result<FitResult> {
    fit_mle_detailed(ds, options).map(|f| f.result)
}
