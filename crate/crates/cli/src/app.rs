//! Executes a parsed configuration.

use std::ffi::OsString;
use std::io::Write;

use censcov_core::estimators::fit_method;
use censcov_core::numerics::RngStream;
use censcov_core::simulation::ScenarioSpec;
use clap::Parser;

use crate::config::{Cli, RunConfig, Task};
use crate::error::{CliError, CliResult};
use crate::io::{parse_dataset_csv, Columns};
use crate::report::{render_analysis, render_simulation, ScenarioResult};
use crate::simulate::run_monte_carlo_parallel;

/// Produces the report text for a configuration.
pub fn execute(config: &RunConfig) -> CliResult<String> {
    match &config.task {
        Task::Simulate(sim) => {
            let mut results = Vec::with_capacity(sim.scenarios.len());
            for label in &sim.scenarios {
                let mut spec = if sim.published_q {
                    ScenarioSpec::published_preset(label)?
                } else {
                    ScenarioSpec::preset(label)?
                };
                if let Some(n) = sim.n {
                    spec = spec.with_n(n);
                }
                let rows = run_monte_carlo_parallel(
                    &spec,
                    &config.methods,
                    sim.k,
                    config.seed,
                    &config.estimator,
                    sim.workers,
                )?;
                results.push(ScenarioResult {
                    scenario: label.clone(),
                    k: sim.k,
                    rows,
                });
            }
            render_simulation(&results, config.format)
        }
        Task::Analyze(a) => {
            let ds = parse_dataset_csv(&a.data, &Columns::new(&a.y, &a.value, &a.status))?;
            let rng = RngStream::new(config.seed, 0);
            let fits = config
                .methods
                .iter()
                .map(|&m| {
                    fit_method(m, &ds, None, &config.estimator, &rng).map_err(|source| {
                        CliError::Method {
                            method: m.name(),
                            source,
                        }
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            render_analysis(&fits, config.format)
        }
    }
}

/// Runs a configuration, writing the report to `--out` or `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let text = execute(config)?;
    match &config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Full command-line entry point; returns the process exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                crate::error::EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|config| run(&config, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
