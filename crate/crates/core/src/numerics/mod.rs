//! Numerical kernel: normal distribution functions, least squares,
//! Nelder-Mead, numeric Hessians and random variates.

pub mod hessian;
pub mod normal;
pub mod ols;
pub mod optim;
pub mod rng;

pub use hessian::{numeric_hessian, HessianStep, SymMatrix};
pub use normal::{log_std_normal_cdf, std_normal_cdf, std_normal_pdf};
pub use ols::{ols_fit, OlsFit};
pub use optim::{minimize, NelderMeadOptions, OptimResult};
pub use rng::{sample_normal, sample_weibull, RngStream};
