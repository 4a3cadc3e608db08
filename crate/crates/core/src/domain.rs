//! Data types shared by the estimators and the simulation engine.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::estimators::rubin::MiCombined;
use crate::numerics::normal;

/// Two-sided 95% normal quantile used for every confidence interval.
pub const Z_975: f64 = 1.959964;

/// One subject: outcome `y`, observed covariate `v = min(x, c)` and the
/// indicator `delta` (1 when `x` itself was observed, 0 when censored).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub y: f64,
    pub v: f64,
    pub delta: u8,
}

impl Observation {
    pub fn new(y: f64, v: f64, delta: u8) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::Domain("outcome must be finite"));
        }
        if !v.is_finite() {
            return Err(Error::Domain("covariate value must be finite"));
        }
        if delta > 1 {
            return Err(Error::Usage("status indicator must be 0 or 1"));
        }
        Ok(Self { y, v, delta })
    }

    #[inline]
    pub fn is_observed(&self) -> bool {
        self.delta == 1
    }
}

/// Validated, immutable collection of observations.
#[derive(Debug, Clone, PartialEq)]
pub struct CensoredDataset {
    records: Vec<Observation>,
    m: usize,
}

impl CensoredDataset {
    /// Validates every record; the row number in errors is 1-based.
    pub fn new(records: Vec<Observation>) -> Result<Self> {
        for (i, r) in records.iter().enumerate() {
            if !r.y.is_finite() || !r.v.is_finite() {
                return Err(Error::InvalidRecord {
                    row: i + 1,
                    reason: "non-finite value",
                });
            }
            if r.delta > 1 {
                return Err(Error::InvalidRecord {
                    row: i + 1,
                    reason: "status must be 0 or 1",
                });
            }
        }
        let m = records.iter().filter(|r| r.is_observed()).count();
        Ok(Self { records, m })
    }

    /// Builds a dataset from parallel columns.
    pub fn from_columns(ys: &[f64], vs: &[f64], deltas: &[u8]) -> Result<Self> {
        if ys.len() != vs.len() || ys.len() != deltas.len() {
            return Err(Error::Usage("column lengths differ"));
        }
        let records = ys
            .iter()
            .zip(vs)
            .zip(deltas)
            .map(|((&y, &v), &delta)| Observation { y, v, delta })
            .collect();
        Self::new(records)
    }

    pub fn records(&self) -> &[Observation] {
        &self.records
    }

    pub fn n(&self) -> usize {
        self.records.len()
    }

    /// Number of uncensored rows.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_censored(&self) -> usize {
        self.n() - self.m
    }

    pub fn ys(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.y).collect()
    }

    pub fn vs(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.v).collect()
    }

    pub fn deltas(&self) -> Vec<u8> {
        self.records.iter().map(|r| r.delta).collect()
    }

    pub fn observed(&self) -> impl Iterator<Item = &Observation> {
        self.records.iter().filter(|r| r.is_observed())
    }

    pub fn censored_fraction(&self) -> f64 {
        if self.records.is_empty() {
            0.0
        } else {
            self.n_censored() as f64 / self.n() as f64
        }
    }

    /// Rows selected by index, in the order given (bootstrap resamples).
    pub fn subset(&self, rows: &[usize]) -> Self {
        let records: Vec<Observation> = rows.iter().map(|&i| self.records[i]).collect();
        let m = records.iter().filter(|r| r.is_observed()).count();
        Self { records, m }
    }
}

/// The estimators compared by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// OLS on the true, uncensored covariate (simulation only).
    Oracle,
    CompleteCase,
    MeanSubstitution,
    Mle,
    CondSingle,
    CondMultiple,
    CoxMultiple,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Oracle,
        Method::CompleteCase,
        Method::MeanSubstitution,
        Method::Mle,
        Method::CondSingle,
        Method::CondMultiple,
        Method::CoxMultiple,
    ];

    /// Methods that only need the observed data.
    pub const OBSERVED: [Method; 6] = [
        Method::CompleteCase,
        Method::MeanSubstitution,
        Method::Mle,
        Method::CondSingle,
        Method::CondMultiple,
        Method::CoxMultiple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::CompleteCase => "complete_case",
            Method::MeanSubstitution => "mean_substitution",
            Method::Mle => "mle",
            Method::CondSingle => "cond_single",
            Method::CondMultiple => "cond_multiple",
            Method::CoxMultiple => "cox_multiple",
        }
    }

    /// Long label used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Oracle => "Actual data (No Censoring)",
            Method::CompleteCase => "Complete-case",
            Method::MeanSubstitution => "Mean Substitution",
            Method::Mle => "Maximum Likelihood",
            Method::CondSingle => "Conditional Single Imputation",
            Method::CondMultiple => "Conditional Multiple Imputation",
            Method::CoxMultiple => "Cox Based Multiple Imputation",
        }
    }

    pub fn from_name(name: &str) -> Option<Method> {
        Method::ALL.iter().copied().find(|m| m.name() == name)
    }

    /// Stable tag used to derive per-method random streams.
    pub(crate) fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub converged: bool,
    pub iterations: usize,
    pub loglik: Option<f64>,
    pub n_used: usize,
    /// Cox imputation fell back to Kaplan-Meier imputation.
    pub fallback: bool,
    /// Rubin combination for the slope, for multiple-imputation methods.
    pub mi: Option<MiCombined>,
}

impl Diagnostics {
    pub fn closed_form(n_used: usize) -> Self {
        Self {
            converged: true,
            iterations: 0,
            loglik: None,
            n_used,
            fallback: false,
            mi: None,
        }
    }
}

/// Output of every estimator.
///
/// Standard errors are `None` when they could not be computed honestly, for
/// instance when the likelihood Hessian is not positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub method: Method,
    pub beta0: f64,
    pub beta1: f64,
    pub se_beta0: Option<f64>,
    pub se_beta1: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl FitResult {
    /// `beta1 -/+ Z_975 * se_beta1`.
    pub fn ci_beta1(&self) -> Option<(f64, f64)> {
        self.se_beta1
            .map(|se| (self.beta1 - Z_975 * se, self.beta1 + Z_975 * se))
    }

    /// Two-sided Wald p-value for `beta1 = 0`.
    pub fn p_value(&self) -> Option<f64> {
        let se = self.se_beta1?;
        if se > 0.0 {
            Some(2.0 * normal::std_normal_sf(libm::fabs(self.beta1) / se))
        } else if self.beta1 == 0.0 {
            Some(1.0)
        } else {
            Some(0.0)
        }
    }

    /// Converged and carries a slope standard error.
    pub fn is_usable(&self) -> bool {
        self.diagnostics.converged && self.se_beta1.is_some() && self.beta1.is_finite()
    }
}

/// Parameters of the normal-covariate likelihood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleParams {
    pub beta0: f64,
    pub beta1: f64,
    pub sigma: f64,
    pub mu_x: f64,
    pub sigma_x: f64,
}

impl MleParams {
    pub fn new(beta0: f64, beta1: f64, sigma: f64, mu_x: f64, sigma_x: f64) -> Result<Self> {
        let p = Self {
            beta0,
            beta1,
            sigma,
            mu_x,
            sigma_x,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.beta0, self.beta1, self.sigma, self.mu_x, self.sigma_x];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("likelihood parameters must be finite"));
        }
        if self.sigma <= 0.0 || self.sigma_x <= 0.0 {
            return Err(Error::Domain("standard deviations must be positive"));
        }
        Ok(())
    }

    /// `(b0, b1, ln sigma, mu_x, ln sigma_x)`, the space the optimizer works in.
    pub fn to_unconstrained(&self) -> [f64; 5] {
        [
            self.beta0,
            self.beta1,
            libm::log(self.sigma),
            self.mu_x,
            libm::log(self.sigma_x),
        ]
    }

    pub fn from_unconstrained(theta: &[f64]) -> Self {
        Self {
            beta0: theta[0],
            beta1: theta[1],
            sigma: libm::exp(theta[2]),
            mu_x: theta[3],
            sigma_x: libm::exp(theta[4]),
        }
    }
}

/// Per-row quantities of the censored likelihood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodTerms {
    /// `sqrt(sigma_x^-2 + beta1^2 sigma^-2)`: inverse SD of `X | Y`.
    pub q: f64,
    /// Residual at the covariate value, `y - b0 - b1 x`.
    pub eps: f64,
    /// Residual at the covariate mean, `y - b0 - b1 mu_x`.
    pub eps_mu: f64,
}

impl LikelihoodTerms {
    pub fn new(params: &MleParams, y: f64, x: f64) -> Self {
        let q2 = 1.0 / (params.sigma_x * params.sigma_x)
            + params.beta1 * params.beta1 / (params.sigma * params.sigma);
        Self {
            q: libm::sqrt(q2),
            eps: y - params.beta0 - params.beta1 * x,
            eps_mu: y - params.beta0 - params.beta1 * params.mu_x,
        }
    }
}
