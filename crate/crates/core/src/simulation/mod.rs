//! Scenario generators and the Monte Carlo engine.
//!
//! Replication `j` (1-based) uses the stream `RngStream::new(master_seed, j)`:
//! the dataset is drawn from it directly and each method draws from its own
//! substream. Results therefore do not depend on the order in which
//! replications are run.

pub mod metrics;
pub mod scenario;

pub use metrics::{summarize_method, MetricsRow};
pub use scenario::{
    generate_dataset, simulate_row, Censoring, ScenarioSpec, SimulatedRow, WeibullParams,
    DEPENDENT_C0, PRESET_LABELS,
};

use alloc::vec::Vec;

use crate::domain::Method;
use crate::error::{Error, Result};
use crate::estimators::{fit_method, EstimatorOptions};
use crate::numerics::RngStream;

/// A method may fail on at most this fraction of replications.
pub const MAX_FAILURE_RATE: f64 = 0.2;

/// What one method produced in one replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodOutcome {
    Usable {
        beta1: f64,
        se_beta1: f64,
        fallback: bool,
    },
    Failed,
}

/// All method outcomes of replication `index`, in the order requested.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub index: u64,
    pub outcomes: Vec<(Method, MethodOutcome)>,
}

/// Runs replication `index` of a Monte Carlo study.
pub fn run_replication(
    spec: &ScenarioSpec,
    methods: &[Method],
    options: &EstimatorOptions,
    master_seed: u64,
    index: u64,
) -> Result<Replication> {
    let base = RngStream::new(master_seed, index);
    let mut data_rng = base.clone();
    let (ds, xs) = generate_dataset(spec, &mut data_rng)?;
    let outcomes = methods
        .iter()
        .map(|&m| {
            let outcome = match fit_method(m, &ds, Some(&xs), options, &base) {
                Ok(fit) if fit.is_usable() => MethodOutcome::Usable {
                    beta1: fit.beta1,
                    // is_usable guarantees the SE.
                    se_beta1: fit.se_beta1.unwrap_or(f64::NAN),
                    fallback: fit.diagnostics.fallback,
                },
                Ok(_) => MethodOutcome::Failed,
                Err(e) if e.is_usage() => return Err(e),
                Err(_) => MethodOutcome::Failed,
            };
            Ok((m, outcome))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Replication { index, outcomes })
}

/// Summarizes replications (in any order) into one row per method.
///
/// Fails with [`Error::FailureRate`] when a method failed on more than 20% of
/// the replications.
pub fn summarize_replications(
    methods: &[Method],
    replications: &[Replication],
    beta_true: f64,
) -> Result<Vec<MetricsRow>> {
    let mut sorted: Vec<&Replication> = replications.iter().collect();
    sorted.sort_by_key(|r| r.index);
    let k = sorted.len();
    let mut rows = Vec::with_capacity(methods.len());
    for (col, &method) in methods.iter().enumerate() {
        let mut est = Vec::with_capacity(k);
        let mut ses = Vec::with_capacity(k);
        let mut fallback = 0;
        for rep in &sorted {
            let (m, outcome) = rep.outcomes[col];
            debug_assert_eq!(m, method);
            if let MethodOutcome::Usable {
                beta1,
                se_beta1,
                fallback: fb,
            } = outcome
            {
                est.push(beta1);
                ses.push(se_beta1);
                fallback += usize::from(fb);
            }
        }
        let failed = k - est.len();
        if failed as f64 > MAX_FAILURE_RATE * k as f64 {
            return Err(Error::FailureRate { method, failed, k });
        }
        let mut row = summarize_method(method, &est, &ses, beta_true)?;
        row.k_failed = failed;
        row.k_fallback = fallback;
        rows.push(row);
    }
    Ok(rows)
}

/// Sequential Monte Carlo study over replications `1..=k`.
pub fn run_monte_carlo(
    spec: &ScenarioSpec,
    methods: &[Method],
    k: usize,
    master_seed: u64,
    options: &EstimatorOptions,
) -> Result<Vec<MetricsRow>> {
    if k < 2 {
        return Err(Error::Usage("at least two replications are needed"));
    }
    if methods.is_empty() {
        return Err(Error::Usage("no methods requested"));
    }
    let reps = (1..=k as u64)
        .map(|j| run_replication(spec, methods, options, master_seed, j))
        .collect::<Result<Vec<_>>>()?;
    summarize_replications(methods, &reps, spec.beta1)
}
