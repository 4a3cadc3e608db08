//! Completed datasets: censored covariates replaced by imputed values.

use alloc::vec::Vec;

use crate::domain::CensoredDataset;
use crate::error::{Error, Result};
use crate::numerics::RngStream;
use crate::survival::{km_fit, CoxModel, KmCurve, TailRule};

#[derive(Debug, Clone, PartialEq)]
pub struct ImputedDataset<'a> {
    pub xs: Vec<f64>,
    pub source: &'a CensoredDataset,
    /// 1 where the row was censored and `xs` holds an imputed value.
    pub imputed_mask: Vec<u8>,
}

impl<'a> ImputedDataset<'a> {
    /// Keeps observed rows and calls `fill(row, y, v)` for censored ones.
    pub fn build<F>(source: &'a CensoredDataset, mut fill: F) -> Result<Self>
    where
        F: FnMut(usize, f64, f64) -> Result<f64>,
    {
        let mut xs = Vec::with_capacity(source.n());
        let mut imputed_mask = Vec::with_capacity(source.n());
        for (i, r) in source.records().iter().enumerate() {
            if r.is_observed() {
                xs.push(r.v);
                imputed_mask.push(0);
            } else {
                xs.push(fill(i, r.y, r.v)?);
                imputed_mask.push(1);
            }
        }
        Ok(Self {
            xs,
            source,
            imputed_mask,
        })
    }
}

/// Kaplan-Meier curve of the covariate with the tail closed.
pub fn covariate_km(ds: &CensoredDataset) -> Result<KmCurve> {
    km_fit(&ds.vs(), &ds.deltas(), TailRule::EfronEvent)
}

/// A censored value at the largest observed value is closed into an event
/// by the tail rule, so the curve has nothing beyond it. Such a row keeps
/// its own value.
pub(crate) fn at_tail(result: Result<f64>, v: f64) -> Result<f64> {
    match result {
        Err(Error::NoMass { .. }) => Ok(v),
        other => other,
    }
}

/// Each censored value replaced by `E[X | X > v]` under the covariate's
/// Kaplan-Meier curve.
pub fn impute_km_mean(ds: &CensoredDataset) -> Result<ImputedDataset<'_>> {
    let curve = covariate_km(ds)?;
    impute_with_curve_mean(ds, &curve)
}

pub(crate) fn impute_with_curve_mean<'a>(
    ds: &'a CensoredDataset,
    curve: &KmCurve,
) -> Result<ImputedDataset<'a>> {
    ImputedDataset::build(ds, |_, _, v| at_tail(curve.conditional_mean(v), v))
}

/// Each censored value replaced by a draw from the Kaplan-Meier conditional
/// distribution beyond it.
pub fn impute_km_draw<'a>(
    ds: &'a CensoredDataset,
    curve: &KmCurve,
    rng: &mut RngStream,
) -> Result<ImputedDataset<'a>> {
    ImputedDataset::build(ds, |_, _, v| at_tail(curve.conditional_draw(v, rng), v))
}

/// Each censored value replaced by a draw from the Cox conditional
/// distribution of the covariate given the row's outcome.
pub fn impute_cox_draw<'a>(
    ds: &'a CensoredDataset,
    model: &CoxModel,
    rng: &mut RngStream,
) -> Result<ImputedDataset<'a>> {
    ImputedDataset::build(ds, |_, y, v| {
        at_tail(model.conditional_quantile(y, v, rng.uniform()), v)
    })
}
