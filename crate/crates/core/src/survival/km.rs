//! Product-limit (Kaplan-Meier) curves for the covariate, and the conditional
//! distribution of `X` beyond a censoring point that the imputation
//! estimators draw from.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::RngStream;

/// How the curve is closed when the largest observation is censored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailRule {
    /// Treat the observations at the maximum as events, so the curve reaches 0.
    #[default]
    EfronEvent,
    /// Leave the curve as estimated; it may never reach 0.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KmCurve {
    /// Distinct event times, strictly increasing.
    pub times: Vec<f64>,
    /// S(t) just after each event time.
    pub surv: Vec<f64>,
    pub n_at_risk: Vec<usize>,
    pub n_events: Vec<usize>,
    pub tail_rule: TailRule,
    /// `tail_area[k]` = integral of S from `times[k]` to infinity; the last
    /// entry is 0. Infinite when the curve does not reach zero.
    tail_area: Vec<f64>,
}

/// Fits the product-limit estimator to `(values, events)`.
///
/// Censorings tied with events at the same value stay in that value's risk
/// set, i.e. events are processed first.
pub fn km_fit(values: &[f64], events: &[u8], tail_rule: TailRule) -> Result<KmCurve> {
    if values.is_empty() {
        return Err(Error::Usage("Kaplan-Meier needs at least one observation"));
    }
    if values.len() != events.len() {
        return Err(Error::Usage("values and events differ in length"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("Kaplan-Meier values must be finite"));
    }
    if events.iter().any(|&e| e > 1) {
        return Err(Error::Usage("event indicators must be 0 or 1"));
    }

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let n = values.len();
    let mut times = Vec::new();
    let mut surv = Vec::new();
    let mut n_at_risk = Vec::new();
    let mut n_events = Vec::new();
    let mut s = 1.0;
    let mut start = 0;
    while start < n {
        let t = values[order[start]];
        let mut end = start;
        let mut d = 0;
        while end < n && values[order[end]] == t {
            d += events[order[end]] as usize;
            end += 1;
        }
        let at_risk = n - start;
        if end == n && tail_rule == TailRule::EfronEvent {
            d = end - start;
        }
        if d > 0 {
            s = if d == at_risk {
                0.0
            } else {
                s * (1.0 - d as f64 / at_risk as f64)
            };
            times.push(t);
            surv.push(s);
            n_at_risk.push(at_risk);
            n_events.push(d);
        }
        start = end;
    }

    let k = times.len();
    let mut tail_area = alloc::vec![0.0; k];
    if k > 0 {
        tail_area[k - 1] = if surv[k - 1] > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        for j in (0..k.saturating_sub(1)).rev() {
            tail_area[j] = tail_area[j + 1] + surv[j] * (times[j + 1] - times[j]);
        }
    }

    Ok(KmCurve {
        times,
        surv,
        n_at_risk,
        n_events,
        tail_rule,
        tail_area,
    })
}

impl KmCurve {
    /// Number of event times at or below `t`.
    #[inline]
    fn index_after(&self, t: f64) -> usize {
        self.times.partition_point(|&x| x <= t)
    }

    /// Right-continuous step value S(t).
    pub fn survival_at(&self, t: f64) -> f64 {
        match self.index_after(t) {
            0 => 1.0,
            i => self.surv[i - 1],
        }
    }

    pub fn reaches_zero(&self) -> bool {
        self.surv.last().is_some_and(|&s| s == 0.0)
    }

    /// E[X | X > c] = c + (integral of S over (c, inf)) / S(c).
    pub fn conditional_mean(&self, c: f64) -> Result<f64> {
        if !c.is_finite() {
            return Err(Error::Domain("cutoff must be finite"));
        }
        let idx = self.index_after(c);
        let s_c = if idx == 0 { 1.0 } else { self.surv[idx - 1] };
        if s_c <= 0.0 {
            return Err(Error::NoMass { cutoff: c });
        }
        if idx == self.times.len() || !self.reaches_zero() {
            return Err(Error::OpenTail);
        }
        let area = s_c * (self.times[idx] - c) + self.tail_area[idx];
        Ok(c + area / s_c)
    }

    /// Inverse-transform draw from X | X > c for a given uniform `u` in (0,1):
    /// the first event time `t > c` with `S(t) <= u S(c)`.
    pub fn conditional_quantile(&self, c: f64, u: f64) -> Result<f64> {
        let idx = self.index_after(c);
        let s_c = if idx == 0 { 1.0 } else { self.surv[idx - 1] };
        if s_c <= 0.0 {
            return Err(Error::NoMass { cutoff: c });
        }
        let target = u * s_c;
        let j = idx + self.surv[idx..].partition_point(|&s| s > target);
        self.times.get(j).copied().ok_or(Error::OpenTail)
    }

    pub fn conditional_draw(&self, c: f64, rng: &mut RngStream) -> Result<f64> {
        self.conditional_quantile(c, rng.uniform())
    }
}

/// E[X | X > c] from a fitted curve.
pub fn km_conditional_mean(curve: &KmCurve, c: f64) -> Result<f64> {
    curve.conditional_mean(c)
}
