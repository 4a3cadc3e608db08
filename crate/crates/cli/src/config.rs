//! Command-line flags, the optional key=value config file, and the merged
//! run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use censcov_core::estimators::{EstimatorOptions, ImputationModel};
use censcov_core::simulation::PRESET_LABELS;
use censcov_core::Method;
use clap::{Args, Parser, Subcommand};

use crate::error::{CliError, CliResult};
use crate::report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "censcov",
    version,
    about = "Linear regression with a randomly right-censored covariate"
)]
pub struct Cli {
    /// key=value file supplying defaults; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte Carlo study on built-in scenarios.
    Simulate(SimulateArgs),
    /// Fit the estimators to a CSV dataset.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Comma-separated method names, or "all".
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "bootstrap-b")]
    pub bootstrap_b: Option<usize>,
    #[arg(long)]
    pub imputations: Option<usize>,
    /// bootstrap (refit per imputation) or fixed.
    #[arg(long = "imputation-model")]
    pub imputation_model: Option<String>,
    /// table, csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct SimulateArgs {
    /// Comma-separated scenario labels such as case1-heavy-n500.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Override the scenario's sample size.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Use the published censoring scales instead of the calibrated ones.
    #[arg(long = "published-q")]
    pub published_q: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Default)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Outcome column.
    #[arg(long)]
    pub y: Option<String>,
    /// Censored covariate column.
    #[arg(long)]
    pub value: Option<String>,
    /// Status column: 1 observed, 0 censored.
    #[arg(long)]
    pub status: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateConfig {
    pub scenarios: Vec<String>,
    pub k: usize,
    pub n: Option<usize>,
    pub workers: usize,
    pub published_q: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeConfig {
    pub data: PathBuf,
    pub y: String,
    pub value: String,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Simulate(SimulateConfig),
    Analyze(AnalyzeConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub methods: Vec<Method>,
    pub seed: u64,
    pub estimator: EstimatorOptions,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", i + 1))
        })?;
        let key = k.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key '{key}'",
                i + 1
            )));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

const KNOWN_KEYS: [&str; 16] = [
    "scenario",
    "k",
    "n",
    "seed",
    "methods",
    "bootstrap-b",
    "imputations",
    "imputation-model",
    "workers",
    "format",
    "out",
    "data",
    "y",
    "value",
    "status",
    "published-q",
];

struct Merged<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Merged<'_> {
    fn text(&self, flag: Option<&String>, key: &str) -> Option<String> {
        flag.cloned().or_else(|| self.file.get(key).cloned())
    }

    fn parsed<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key '{key}': invalid value '{v}'"))),
        }
    }
}

pub fn valid_labels() -> String {
    PRESET_LABELS.join(", ")
}

pub fn parse_methods(spec: &str, simulate: bool) -> CliResult<Vec<Method>> {
    if spec.trim() == "all" {
        return Ok(if simulate {
            Method::ALL.to_vec()
        } else {
            Method::OBSERVED.to_vec()
        });
    }
    let mut out = Vec::new();
    for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let m = Method::from_name(name).ok_or_else(|| {
            let names: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
            CliError::Usage(format!(
                "unknown method '{name}' (valid: all, {})",
                names.join(", ")
            ))
        })?;
        if !simulate && m == Method::Oracle {
            return Err(CliError::Usage(
                "the oracle method needs the uncensored covariate and is only available in simulate".into(),
            ));
        }
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no methods given".into()));
    }
    Ok(out)
}

fn parse_model(s: &str) -> CliResult<ImputationModel> {
    match s {
        "bootstrap" => Ok(ImputationModel::Bootstrap),
        "fixed" => Ok(ImputationModel::Fixed),
        other => Err(CliError::Usage(format!(
            "unknown imputation model '{other}' (expected bootstrap or fixed)"
        ))),
    }
}

fn parse_bool(key: &str, v: &str) -> CliResult<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Usage(format!(
            "config key '{key}': expected true or false"
        ))),
    }
}

fn common(
    c: &CommonArgs,
    m: &Merged,
    simulate: bool,
) -> CliResult<(
    Vec<Method>,
    Option<u64>,
    EstimatorOptions,
    Format,
    Option<PathBuf>,
)> {
    let methods = parse_methods(
        &m.text(c.methods.as_ref(), "methods")
            .unwrap_or_else(|| "all".into()),
        simulate,
    )?;
    let seed = m.parsed(c.seed, "seed")?;
    let mut est = EstimatorOptions::default();
    if let Some(b) = m.parsed(c.bootstrap_b, "bootstrap-b")? {
        if b == 0 {
            return Err(CliError::Usage("--bootstrap-b must be at least 1".into()));
        }
        est.bootstrap_b = b;
    }
    if let Some(mi) = m.parsed(c.imputations, "imputations")? {
        if mi < 2 {
            return Err(CliError::Usage("--imputations must be at least 2".into()));
        }
        est.m_imputations = mi;
    }
    if let Some(model) = m.text(c.imputation_model.as_ref(), "imputation-model") {
        est.imputation_model = parse_model(&model)?;
    }
    let format = match m.text(c.format.as_ref(), "format") {
        Some(f) => f.parse()?,
        None => Format::Table,
    };
    let out = c
        .out
        .clone()
        .or_else(|| m.file.get("out").map(PathBuf::from));
    Ok((methods, seed, est, format, out))
}

impl RunConfig {
    /// Merges parsed flags with the config file (if any) and validates.
    pub fn from_cli(cli: Cli) -> CliResult<Self> {
        let file = match &cli.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        let m = Merged { file: &file };
        match cli.command {
            Command::Simulate(a) => {
                let (methods, seed, estimator, format, out) = common(&a.common, &m, true)?;
                let scenario = m.text(a.scenario.as_ref(), "scenario").ok_or_else(|| {
                    CliError::Usage(format!(
                        "simulate needs --scenario (valid: {})",
                        valid_labels()
                    ))
                })?;
                let scenarios: Vec<String> = scenario
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                for s in &scenarios {
                    if !PRESET_LABELS.contains(&s.as_str()) {
                        return Err(CliError::Usage(format!(
                            "unknown scenario '{s}' (valid: {})",
                            valid_labels()
                        )));
                    }
                }
                if scenarios.is_empty() {
                    return Err(CliError::Usage(format!(
                        "simulate needs --scenario (valid: {})",
                        valid_labels()
                    )));
                }
                let k = m
                    .parsed(a.k, "k")?
                    .ok_or_else(|| CliError::Usage("simulate needs --k".into()))?;
                if k < 2 {
                    return Err(CliError::Usage("--k must be at least 2".into()));
                }
                let seed = seed.ok_or_else(|| CliError::Usage("simulate needs --seed".into()))?;
                let n = m.parsed(a.n, "n")?;
                if n.is_some_and(|n| n < 3) {
                    return Err(CliError::Usage("--n must be at least 3".into()));
                }
                let workers = m.parsed(a.workers, "workers")?.unwrap_or(1);
                if workers == 0 {
                    return Err(CliError::Usage("--workers must be at least 1".into()));
                }
                let published_q = a.published_q
                    || match file.get("published-q") {
                        Some(v) => parse_bool("published-q", v)?,
                        None => false,
                    };
                Ok(Self {
                    task: Task::Simulate(SimulateConfig {
                        scenarios,
                        k,
                        n,
                        workers,
                        published_q,
                    }),
                    methods,
                    seed,
                    estimator,
                    format,
                    out,
                })
            }
            Command::Analyze(a) => {
                let (methods, seed, estimator, format, out) = common(&a.common, &m, false)?;
                let data = a
                    .data
                    .clone()
                    .or_else(|| file.get("data").map(PathBuf::from))
                    .ok_or_else(|| CliError::Usage("analyze needs --data".into()))?;
                let need = |flag: Option<&String>, key: &str| {
                    m.text(flag, key)
                        .ok_or_else(|| CliError::Usage(format!("analyze needs --{key}")))
                };
                Ok(Self {
                    task: Task::Analyze(AnalyzeConfig {
                        data,
                        y: need(a.y.as_ref(), "y")?,
                        value: need(a.value.as_ref(), "value")?,
                        status: need(a.status.as_ref(), "status")?,
                    }),
                    methods,
                    seed: seed.unwrap_or(0),
                    estimator,
                    format,
                    out,
                })
            }
        }
    }
}
