//! Rendering simulation summaries and fitted models as text, CSV or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use censcov_core::simulation::MetricsRow;
use censcov_core::FitResult;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Usage(format!(
                "unknown format '{other}' (expected table, csv or json)"
            ))),
        }
    }
}

/// Simulation summary for one method in one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub scenario: String,
    pub method: String,
    pub bias: f64,
    pub emp_se: f64,
    pub sim_error: f64,
    pub mse: f64,
    pub coverage: f64,
    pub k_used: usize,
}

/// JSON shape of a simulation row: the CSV fields plus diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationJson {
    #[serde(flatten)]
    pub record: SimulationRecord,
    pub label: String,
    pub k_failed: usize,
    pub k_fallback: usize,
}

pub struct ScenarioResult {
    pub scenario: String,
    pub k: usize,
    pub rows: Vec<MetricsRow>,
}

impl SimulationRecord {
    pub fn new(scenario: &str, row: &MetricsRow) -> Self {
        Self {
            scenario: scenario.to_string(),
            method: row.method.name().to_string(),
            bias: row.bias,
            emp_se: row.emp_se,
            sim_error: row.sim_error,
            mse: row.mse(),
            coverage: row.coverage,
            k_used: row.k_used,
        }
    }
}

fn csv_string<S: Serialize>(records: impl IntoIterator<Item = S>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)
            .map_err(|e| CliError::Usage(format!("cannot render CSV: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("cannot render CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
}

fn json_string<S: Serialize>(value: &S) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Usage(format!("cannot render JSON: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn label_width<'a>(labels: impl Iterator<Item = &'a str>, header: &str) -> usize {
    labels
        .map(str::len)
        .chain([header.len()])
        .max()
        .unwrap_or(0)
}

pub fn render_simulation(results: &[ScenarioResult], format: Format) -> CliResult<String> {
    if results.iter().all(|r| r.rows.is_empty()) {
        return Err(CliError::Usage("nothing to report".into()));
    }
    match format {
        Format::Csv => csv_string(
            results
                .iter()
                .flat_map(|s| s.rows.iter().map(|r| SimulationRecord::new(&s.scenario, r))),
        ),
        Format::Json => {
            let rows: Vec<SimulationJson> = results
                .iter()
                .flat_map(|s| {
                    s.rows.iter().map(|r| SimulationJson {
                        record: SimulationRecord::new(&s.scenario, r),
                        label: r.method.label().to_string(),
                        k_failed: r.k_failed,
                        k_fallback: r.k_fallback,
                    })
                })
                .collect();
            json_string(&rows)
        }
        Format::Table => {
            let mut out = String::new();
            for (i, s) in results.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "Scenario {} (K = {})", s.scenario, s.k);
                let w = label_width(s.rows.iter().map(|r| r.method.label()), "Method");
                let _ = writeln!(
                    out,
                    "{:<w$}  {:>8}  {:>8}  {:>16}  {:>8}  {:>8}",
                    "Method", "Bias", "SE", "Simulation Error", "MSE", "Coverage"
                );
                for r in &s.rows {
                    let _ = writeln!(
                        out,
                        "{:<w$}  {:>8.4}  {:>8.4}  {:>16.4}  {:>8.4}  {:>8.4}",
                        r.method.label(),
                        r.bias,
                        r.emp_se,
                        r.sim_error,
                        r.mse(),
                        r.coverage
                    );
                }
                let notes: Vec<String> = s
                    .rows
                    .iter()
                    .filter(|r| r.k_failed > 0 || r.k_fallback > 0)
                    .map(|r| {
                        format!(
                            "{}: {} of {} replications used, {} Kaplan-Meier fallbacks",
                            r.method.name(),
                            r.k_used,
                            r.k_used + r.k_failed,
                            r.k_fallback
                        )
                    })
                    .collect();
                for n in notes {
                    let _ = writeln!(out, "  note: {n}");
                }
            }
            Ok(out)
        }
    }
}

/// One fitted model in analyze mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub method: String,
    pub estimate: f64,
    pub se: Option<f64>,
    pub p_value: Option<f64>,
    pub ci_lower: Option<f64>,
    pub ci_upper: Option<f64>,
    pub intercept: f64,
    pub converged: bool,
    pub n_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisJson {
    #[serde(flatten)]
    pub record: AnalysisRecord,
    pub label: String,
    pub iterations: usize,
    pub loglik: Option<f64>,
    pub fallback: bool,
    pub between_var: Option<f64>,
}

impl AnalysisRecord {
    pub fn new(fit: &FitResult) -> Self {
        let ci = fit.ci_beta1();
        Self {
            method: fit.method.name().to_string(),
            estimate: fit.beta1,
            se: fit.se_beta1,
            p_value: fit.p_value(),
            ci_lower: ci.map(|c| c.0),
            ci_upper: ci.map(|c| c.1),
            intercept: fit.beta0,
            converged: fit.diagnostics.converged,
            n_used: fit.diagnostics.n_used,
        }
    }
}

fn opt4(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:.4}"))
}

pub fn render_analysis(fits: &[FitResult], format: Format) -> CliResult<String> {
    if fits.is_empty() {
        return Err(CliError::Usage("nothing to report".into()));
    }
    match format {
        Format::Csv => csv_string(fits.iter().map(AnalysisRecord::new)),
        Format::Json => {
            let rows: Vec<AnalysisJson> = fits
                .iter()
                .map(|f| AnalysisJson {
                    record: AnalysisRecord::new(f),
                    label: f.method.label().to_string(),
                    iterations: f.diagnostics.iterations,
                    loglik: f.diagnostics.loglik,
                    fallback: f.diagnostics.fallback,
                    between_var: f.diagnostics.mi.map(|m| m.between_var),
                })
                .collect();
            json_string(&rows)
        }
        Format::Table => {
            let mut out = String::new();
            let w = label_width(fits.iter().map(|f| f.method.label()), "Method");
            let _ = writeln!(
                out,
                "{:<w$}  {:>10}  {:>10}  {:>10}",
                "Method", "Estimate", "SE", "P-value"
            );
            for f in fits {
                let _ = writeln!(
                    out,
                    "{:<w$}  {:>10.4}  {:>10}  {:>10}",
                    f.method.label(),
                    f.beta1,
                    opt4(f.se_beta1),
                    opt4(f.p_value())
                );
            }
            Ok(out)
        }
    }
}
