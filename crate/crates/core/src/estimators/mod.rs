//! The regression estimators, the censored log-likelihood and Rubin's rules.
//!
//! Every estimator is a pure function of the dataset, its options and (for
//! the stochastic ones) a random stream.

pub mod basic;
pub mod impute;
pub mod loglik;
pub mod mle;
pub mod multiple;
pub mod rubin;
pub mod single;

pub use basic::{fit_complete_case, fit_mean_substitution, fit_oracle};
pub use impute::{impute_km_mean, ImputedDataset};
pub use loglik::{censored_loglik, censored_term, observed_term};
pub use mle::{fit_mle, fit_mle_detailed, MleFit, MleOptions};
pub use multiple::{fit_conditional_multiple, fit_cox_multiple, ImputationModel};
pub use rubin::{rubin_combine, MiCombined};
pub use single::fit_conditional_single;

use crate::domain::{CensoredDataset, FitResult, Method};
use crate::error::{Error, Result};
use crate::numerics::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOptions {
    /// Bootstrap resamples for conditional single imputation.
    pub bootstrap_b: usize,
    /// Imputations for the multiple-imputation methods.
    pub m_imputations: usize,
    pub imputation_model: ImputationModel,
    pub mle: MleOptions,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            bootstrap_b: 500,
            m_imputations: 10,
            imputation_model: ImputationModel::Bootstrap,
            mle: MleOptions::default(),
        }
    }
}

/// Runs one method. `true_x` is required for [`Method::Oracle`] only.
///
/// Each stochastic method draws from its own substream of `rng`, so adding
/// or removing methods from a run leaves the others unchanged.
pub fn fit_method(
    method: Method,
    ds: &CensoredDataset,
    true_x: Option<&[f64]>,
    options: &EstimatorOptions,
    rng: &RngStream,
) -> Result<FitResult> {
    let mut stream = rng.substream(method.tag());
    match method {
        Method::Oracle => {
            let xs = true_x.ok_or(Error::Usage(
                "the oracle estimator needs the true covariate",
            ))?;
            fit_oracle(xs, &ds.ys())
        }
        Method::CompleteCase => fit_complete_case(ds),
        Method::MeanSubstitution => fit_mean_substitution(ds),
        Method::Mle => fit_mle(ds, &options.mle),
        Method::CondSingle => fit_conditional_single(ds, options.bootstrap_b, &mut stream),
        Method::CondMultiple => fit_conditional_multiple(
            ds,
            options.m_imputations,
            options.imputation_model,
            &mut stream,
        ),
        Method::CoxMultiple => fit_cox_multiple(
            ds,
            options.m_imputations,
            options.imputation_model,
            &mut stream,
        ),
    }
}
