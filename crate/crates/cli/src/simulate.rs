//! Multi-threaded Monte Carlo driver.

use censcov_core::estimators::EstimatorOptions;
use censcov_core::simulation::{run_replication, summarize_replications, MetricsRow, ScenarioSpec};
use censcov_core::{Method, Result};
use rayon::prelude::*;

/// Same result as the sequential engine for any `workers >= 1`: every
/// replication owns its random stream and summaries are taken in
/// replication order.
pub fn run_monte_carlo_parallel(
    spec: &ScenarioSpec,
    methods: &[Method],
    k: usize,
    master_seed: u64,
    options: &EstimatorOptions,
    workers: usize,
) -> Result<Vec<MetricsRow>> {
    if k < 2 {
        return Err(censcov_core::Error::Usage(
            "at least two replications are needed",
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|_| censcov_core::Error::Usage("cannot start worker threads"))?;
    let reps = pool.install(|| {
        (1..=k as u64)
            .into_par_iter()
            .map(|j| run_replication(spec, methods, options, master_seed, j))
            .collect::<Result<Vec<_>>>()
    })?;
    summarize_replications(methods, &reps, spec.beta1)
}
