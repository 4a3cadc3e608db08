use core::fmt;

use crate::domain::Method;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong inside the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A non-finite argument reached a function defined only on finite reals.
    Domain(&'static str),
    /// Caller violated an input contract (lengths, counts, empty input).
    Usage(&'static str),
    /// A distribution parameter is out of range.
    Parameter(&'static str),
    /// OLS design has no spread in the predictor.
    DegenerateDesign,
    /// Fewer usable rows than the estimator needs.
    InsufficientData { needed: usize, available: usize },
    /// Mean substitution with no observed covariate values.
    UndefinedMean,
    /// A survival curve has no mass beyond the conditioning point.
    NoMass { cutoff: f64 },
    /// The survival curve never reaches zero, so tail integrals diverge.
    OpenTail,
    /// Objective is not finite at the optimizer's starting point.
    Start,
    /// Objective evaluation produced a non-finite value.
    Evaluation,
    /// Bootstrap could not find a usable resample.
    ResampleFailure { attempts: usize },
    /// Cox covariate carries no information (constant within every risk set).
    CoxDegenerate,
    /// Invalid or inconsistent record in a dataset.
    InvalidRecord { row: usize, reason: &'static str },
    /// A Monte Carlo method failed on too many replications.
    FailureRate {
        method: Method,
        failed: usize,
        k: usize,
    },
}

impl Error {
    /// Errors caused by bad input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Usage(_) | Error::Parameter(_) | Error::InvalidRecord { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Usage(what) => write!(f, "usage error: {what}"),
            Error::Parameter(what) => write!(f, "parameter error: {what}"),
            Error::DegenerateDesign => write!(f, "degenerate design: predictor has no variance"),
            Error::InsufficientData { needed, available } => write!(
                f,
                "insufficient data: need at least {needed} usable rows, have {available}"
            ),
            Error::UndefinedMean => write!(f, "no observed covariate values to average"),
            Error::NoMass { cutoff } => {
                write!(f, "survival curve has no mass beyond {cutoff}")
            }
            Error::OpenTail => write!(f, "survival curve does not reach zero; tail is open"),
            Error::Start => write!(f, "objective is not finite at the starting point"),
            Error::Evaluation => write!(f, "objective evaluation was not finite"),
            Error::ResampleFailure { attempts } => {
                write!(f, "no usable bootstrap resample after {attempts} attempts")
            }
            Error::CoxDegenerate => write!(f, "Cox covariate is constant within every risk set"),
            Error::InvalidRecord { row, reason } => write!(f, "invalid record {row}: {reason}"),
            Error::FailureRate { method, failed, k } => write!(
                f,
                "method {} failed on {failed} of {k} replications",
                method.name()
            ),
        }
    }
}

impl core::error::Error for Error {}
