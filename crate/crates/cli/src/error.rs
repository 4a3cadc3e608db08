use std::path::PathBuf;

use thiserror::Error;

/// Exit status for bad flags, configuration or input files.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for numerical failures inside an estimator or simulation.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("parse error at data row {row} (line {line}): {reason}")]
    Parse {
        row: usize,
        line: usize,
        reason: String,
    },
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] censcov_core::Error),
    #[error("method {method}: {source}")]
    Method {
        method: &'static str,
        source: censcov_core::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::Method { source: e, .. } if !e.is_usage() => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
