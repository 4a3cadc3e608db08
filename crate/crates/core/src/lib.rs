//! Estimation of a simple linear regression `Y = b0 + b1 X + e` when the
//! predictor `X` is randomly right-censored: we only see `V = min(X, C)` and
//! `delta = 1[X <= C]`.
//!
//! The crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation:
//!
//! * [`numerics`]: normal CDF and its logarithm, OLS, Nelder-Mead, numeric
//!   Hessians and a counter-based random stream.
//! * [`survival`]: Kaplan-Meier curves, conditional means beyond a cutoff and
//!   a one-covariate Cox model with Breslow baseline.
//! * [`estimators`]: complete-case, mean substitution, normal-theory maximum
//!   likelihood, Kaplan-Meier conditional single/multiple imputation and Cox
//!   multiple imputation, plus Rubin's rules.
//! * [`simulation`]: Weibull scenario generators and the Monte Carlo
//!   summaries (bias, empirical SE, simulation error, MSE, coverage).
//!
//! File formats, the command line and multi-threaded Monte Carlo live in the
//! `censcov` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod domain;
pub mod error;
pub mod estimators;
pub mod numerics;
pub mod simulation;
pub mod survival;

pub use domain::{
    CensoredDataset, Diagnostics, FitResult, LikelihoodTerms, Method, MleParams, Observation, Z_975,
};
pub use error::{Error, Result};
