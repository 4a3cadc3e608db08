//! Survival-analysis tools applied to the censored covariate.

pub mod cox;
pub mod km;

pub use cox::{breslow_baseline, cox_conditional_draw, cox_fit, partial_loglik, CoxModel};
pub use km::{km_conditional_mean, km_fit, KmCurve, TailRule};
