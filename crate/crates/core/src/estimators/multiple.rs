//! Multiple imputation from Kaplan-Meier and Cox conditional distributions.

use alloc::vec::Vec;

use crate::domain::{CensoredDataset, Diagnostics, FitResult, Method};
use crate::error::{Error, Result};
use crate::estimators::impute::{
    at_tail, covariate_km, impute_cox_draw, impute_km_draw, ImputedDataset,
};
use crate::estimators::rubin::{rubin_combine, MiCombined};
use crate::numerics::{ols_fit, RngStream};
use crate::survival::{cox_fit, CoxModel};

fn combine<'a, F>(
    ds: &'a CensoredDataset,
    method: Method,
    m_imputations: usize,
    mut impute: F,
) -> Result<FitResult>
where
    F: FnMut() -> Result<ImputedDataset<'a>>,
{
    if m_imputations < 2 {
        return Err(Error::Usage(
            "multiple imputation needs at least two imputations",
        ));
    }
    let ys = ds.ys();
    let mut b0 = Vec::with_capacity(m_imputations);
    let mut v0 = Vec::with_capacity(m_imputations);
    let mut b1 = Vec::with_capacity(m_imputations);
    let mut v1 = Vec::with_capacity(m_imputations);
    for _ in 0..m_imputations {
        let imp = impute()?;
        let fit = ols_fit(&imp.xs, &ys)?;
        b0.push(fit.beta0);
        v0.push(fit.se_beta0 * fit.se_beta0);
        b1.push(fit.beta1);
        v1.push(fit.se_beta1 * fit.se_beta1);
    }
    let c0 = rubin_combine(&b0, &v0)?;
    let c1: MiCombined = rubin_combine(&b1, &v1)?;
    Ok(FitResult {
        method,
        beta0: c0.estimate,
        beta1: c1.estimate,
        se_beta0: Some(c0.se()),
        se_beta1: Some(c1.se()),
        diagnostics: Diagnostics {
            mi: Some(c1),
            ..Diagnostics::closed_form(ds.n())
        },
    })
}

/// How the imputation model is obtained for each imputation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImputationModel {
    /// Refit on a bootstrap resample before every imputation, so the draws
    /// carry the model's own estimation uncertainty.
    #[default]
    Bootstrap,
    /// Fit once on the full data and reuse it for every imputation.
    Fixed,
}

/// Attempts at a usable bootstrap model before the full-data one is used.
const MODEL_REDRAWS: usize = 100;

fn resample(n: usize, rows: &mut [usize], rng: &mut RngStream) {
    rows.iter_mut().for_each(|r| *r = rng.index(n));
}

/// Censored values drawn from the Kaplan-Meier distribution beyond them,
/// `m_imputations` times; OLS per completed dataset, pooled by Rubin's rules.
pub fn fit_conditional_multiple(
    ds: &CensoredDataset,
    m_imputations: usize,
    model: ImputationModel,
    rng: &mut RngStream,
) -> Result<FitResult> {
    let curve = covariate_km(ds)?;
    if model == ImputationModel::Fixed || ds.n_censored() == 0 {
        return combine(ds, Method::CondMultiple, m_imputations, || {
            impute_km_draw(ds, &curve, rng)
        });
    }
    let n = ds.n();
    let mut rows = alloc::vec![0usize; n];
    combine(ds, Method::CondMultiple, m_imputations, || {
        resample(n, &mut rows, rng);
        let boot = covariate_km(&ds.subset(&rows))?;
        // A resample may end below a censoring value; the full curve covers it.
        ImputedDataset::build(ds, |_, _, v| match boot.conditional_draw(v, rng) {
            Err(Error::NoMass { .. }) => at_tail(curve.conditional_draw(v, rng), v),
            other => other,
        })
    })
}

/// Cox model for the covariate given the outcome. Rows tied at the largest
/// covariate value count as events, mirroring the Kaplan-Meier tail rule.
pub fn fit_covariate_cox(ds: &CensoredDataset) -> Result<CoxModel> {
    let vs = ds.vs();
    let max = vs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let events: Vec<u8> = ds
        .records()
        .iter()
        .map(|r| if r.v == max { 1 } else { r.delta })
        .collect();
    cox_fit(&vs, &events, &ds.ys())
}

/// Censored values drawn from the Cox conditional distribution given the
/// outcome. If the Cox fit fails or does not converge, Kaplan-Meier
/// multiple imputation is used instead and `diagnostics.fallback` is set.
pub fn fit_cox_multiple(
    ds: &CensoredDataset,
    m_imputations: usize,
    model: ImputationModel,
    rng: &mut RngStream,
) -> Result<FitResult> {
    if m_imputations < 2 {
        return Err(Error::Usage(
            "multiple imputation needs at least two imputations",
        ));
    }
    let full = match fit_covariate_cox(ds) {
        Ok(m) if m.converged => m,
        Ok(_) | Err(Error::CoxDegenerate) | Err(Error::InsufficientData { .. }) => {
            let mut fit = fit_conditional_multiple(ds, m_imputations, model, rng)?;
            fit.method = Method::CoxMultiple;
            fit.diagnostics.fallback = true;
            return Ok(fit);
        }
        Err(e) => return Err(e),
    };
    let mut fit = if model == ImputationModel::Fixed || ds.n_censored() == 0 {
        combine(ds, Method::CoxMultiple, m_imputations, || {
            impute_cox_draw(ds, &full, rng)
        })?
    } else {
        let n = ds.n();
        let mut rows = alloc::vec![0usize; n];
        combine(ds, Method::CoxMultiple, m_imputations, || {
            let mut boot = None;
            for _ in 0..MODEL_REDRAWS {
                resample(n, &mut rows, rng);
                if let Ok(m) = fit_covariate_cox(&ds.subset(&rows)) {
                    if m.converged {
                        boot = Some(m);
                        break;
                    }
                }
            }
            let boot = boot.as_ref().unwrap_or(&full);
            ImputedDataset::build(ds, |_, y, v| {
                match boot.conditional_quantile(y, v, rng.uniform()) {
                    Err(Error::NoMass { .. }) => {
                        at_tail(full.conditional_quantile(y, v, rng.uniform()), v)
                    }
                    other => other,
                }
            })
        })?
    };
    fit.diagnostics.iterations = full.iterations;
    fit.diagnostics.loglik = Some(full.loglik);
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sample_normal, sample_weibull};

    fn data(n: usize, seed: u64, beta1: f64) -> CensoredDataset {
        let mut rng = RngStream::new(seed, 0);
        let mut ys = Vec::new();
        let mut vs = Vec::new();
        let mut ds = Vec::new();
        for _ in 0..n {
            let x = sample_weibull(2.0, 1.0, &mut rng).unwrap();
            let c = sample_weibull(2.0, 1.2, &mut rng).unwrap();
            ys.push(1.0 + beta1 * x + sample_normal(0.0, 0.5, &mut rng).unwrap());
            vs.push(x.min(c));
            ds.push(u8::from(x <= c));
        }
        CensoredDataset::from_columns(&ys, &vs, &ds).unwrap()
    }

    #[test]
    fn uncensored_has_no_between_variance() {
        let ds = CensoredDataset::from_columns(
            &[1.0, 2.2, 2.9, 4.1, 5.0],
            &[0.1, 0.4, 0.5, 0.9, 1.3],
            &[1; 5],
        )
        .unwrap();
        let ols = ols_fit(&ds.vs(), &ds.ys()).unwrap();
        let mut rng = RngStream::new(1, 1);
        for fit in [
            fit_conditional_multiple(&ds, 10, ImputationModel::Bootstrap, &mut rng).unwrap(),
            fit_cox_multiple(&ds, 10, ImputationModel::Bootstrap, &mut rng).unwrap(),
        ] {
            let mi = fit.diagnostics.mi.unwrap();
            assert_eq!(mi.between_var, 0.0);
            assert_eq!(fit.beta1, ols.beta1);
            assert!((fit.se_beta1.unwrap() - ols.se_beta1).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_outcome_falls_back() {
        let ds = CensoredDataset::from_columns(
            &[2.0; 6],
            &[0.1, 0.4, 0.5, 0.9, 1.3, 0.7],
            &[1, 0, 1, 1, 0, 1],
        )
        .unwrap();
        let mut rng = RngStream::new(1, 1);
        let fit = fit_cox_multiple(&ds, 5, ImputationModel::Bootstrap, &mut rng).unwrap();
        assert!(fit.diagnostics.fallback);
        assert_eq!(fit.method, Method::CoxMultiple);
    }

    #[test]
    fn draws_vary_between_imputations() {
        let ds = data(200, 3, 0.5);
        assert!(ds.n_censored() > 20);
        let mut rng = RngStream::new(2, 2);
        let fit = fit_conditional_multiple(&ds, 10, ImputationModel::Bootstrap, &mut rng).unwrap();
        let mi = fit.diagnostics.mi.unwrap();
        assert!(mi.between_var > 0.0);
        assert!(fit.se_beta1.unwrap() > libm::sqrt(mi.within_var));
        let cox = fit_cox_multiple(&ds, 10, ImputationModel::Bootstrap, &mut rng).unwrap();
        assert!(!cox.diagnostics.fallback);
        assert!(cox.diagnostics.mi.unwrap().between_var > 0.0);
    }

    #[test]
    fn cox_without_outcome_effect_matches_km() {
        // Outcome independent of the covariate: both samplers target the same
        // distribution, so the average slope difference is noise.
        let k = 200;
        let mut diffs = Vec::with_capacity(k);
        for j in 0..k {
            let ds = data(100, 1000 + j as u64, 0.0);
            let rng = RngStream::new(77, j as u64);
            let a =
                fit_conditional_multiple(&ds, 5, ImputationModel::Bootstrap, &mut rng.substream(1))
                    .unwrap();
            let b = fit_cox_multiple(&ds, 5, ImputationModel::Bootstrap, &mut rng.substream(2))
                .unwrap();
            diffs.push(b.beta1 - a.beta1);
        }
        let mean = diffs.iter().sum::<f64>() / k as f64;
        let sd =
            libm::sqrt(diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (k - 1) as f64);
        assert!(
            mean.abs() < 3.0 * sd / libm::sqrt(k as f64),
            "mean {mean} sd {sd}"
        );
    }

    #[test]
    fn rejects_single_imputation() {
        let ds = data(30, 1, 0.5);
        let mut rng = RngStream::new(0, 0);
        assert!(matches!(
            fit_conditional_multiple(&ds, 1, ImputationModel::Fixed, &mut rng),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            fit_cox_multiple(&ds, 1, ImputationModel::Fixed, &mut rng),
            Err(Error::Usage(_))
        ));
    }
}
