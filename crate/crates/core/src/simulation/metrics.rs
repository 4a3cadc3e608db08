//! Monte Carlo summaries of a method's slope estimates.

use crate::domain::{Method, Z_975};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRow {
    pub method: Method,
    /// Mean estimate minus the true slope.
    pub bias: f64,
    /// SD of the estimates across replications.
    pub emp_se: f64,
    /// Mean of the model-based standard errors.
    pub sim_error: f64,
    /// Fraction of replications whose 95% interval covers the truth.
    pub coverage: f64,
    /// Replications that produced a usable fit.
    pub k_used: usize,
    /// Replications where the method failed or did not converge.
    pub k_failed: usize,
    /// Replications where Cox imputation fell back to Kaplan-Meier.
    pub k_fallback: usize,
}

impl MetricsRow {
    /// `bias^2 + emp_se^2`.
    pub fn mse(&self) -> f64 {
        self.bias * self.bias + self.emp_se * self.emp_se
    }
}

/// Bias, empirical SE, mean model SE and coverage of `estimates`.
pub fn summarize_method(
    method: Method,
    estimates: &[f64],
    model_ses: &[f64],
    beta_true: f64,
) -> Result<MetricsRow> {
    if estimates.len() != model_ses.len() {
        return Err(Error::Usage(
            "estimates and standard errors differ in length",
        ));
    }
    let k = estimates.len();
    if k < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            available: k,
        });
    }
    let kf = k as f64;
    let mean = estimates.iter().sum::<f64>() / kf;
    let var = estimates
        .iter()
        .map(|e| (e - mean) * (e - mean))
        .sum::<f64>()
        / (kf - 1.0);
    let sim_error = model_ses.iter().sum::<f64>() / kf;
    let covered = estimates
        .iter()
        .zip(model_ses)
        .filter(|(e, se)| libm::fabs(*e - beta_true) <= Z_975 * *se)
        .count();
    Ok(MetricsRow {
        method,
        bias: mean - beta_true,
        emp_se: libm::sqrt(var),
        sim_error,
        coverage: covered as f64 / kf,
        k_used: k,
        k_failed: 0,
        k_fallback: 0,
    })
}
