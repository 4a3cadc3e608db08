//! Cox proportional hazards with a single covariate, Breslow ties and a
//! Breslow baseline. Here the "time" is the censored covariate `X` and the
//! covariate is the outcome `Y`, so the fitted model gives the distribution
//! of `X` given `Y`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::RngStream;

/// Newton stops once |score| falls below this.
const SCORE_TOL: f64 = 1e-8;
const MAX_NEWTON: usize = 60;
/// Beyond this the partial likelihood is treated as monotone.
const BETA_LIMIT: f64 = 20.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CoxModel {
    /// Log hazard ratio per unit of covariate.
    pub beta: f64,
    /// Covariate value the baseline refers to (the sample mean).
    pub center: f64,
    /// Distinct event times.
    pub baseline_times: Vec<f64>,
    /// Breslow cumulative hazard at `baseline_times`, for covariate `center`.
    pub baseline_cumhaz: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub loglik: f64,
}

/// Event-time groups in ascending order, with the index range of subjects
/// whose value is >= that time (a suffix of the sorted order).
struct RiskSets {
    /// Sorted subject indices.
    order: Vec<usize>,
    /// (time, first position in `order` with value >= time, events, sum of
    /// centered covariate over events)
    groups: Vec<(f64, usize, usize, f64)>,
}

impl RiskSets {
    fn new(values: &[f64], events: &[u8], z: &[f64]) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut groups = Vec::new();
        let mut start = 0;
        while start < n {
            let t = values[order[start]];
            let mut end = start;
            let mut d = 0;
            let mut s = 0.0;
            while end < n && values[order[end]] == t {
                if events[order[end]] == 1 {
                    d += 1;
                    s += z[order[end]];
                }
                end += 1;
            }
            if d > 0 {
                groups.push((t, start, d, s));
            }
            start = end;
        }
        Self { order, groups }
    }

    /// (loglik, score, information) at `beta`.
    fn evaluate(&self, z: &[f64], beta: f64) -> (f64, f64, f64) {
        let n = self.order.len();
        // Suffix sums of w, w z, w z^2 over the sorted order.
        let mut s0 = alloc::vec![0.0; n + 1];
        let mut s1 = alloc::vec![0.0; n + 1];
        let mut s2 = alloc::vec![0.0; n + 1];
        for pos in (0..n).rev() {
            let zi = z[self.order[pos]];
            let w = libm::exp(beta * zi);
            s0[pos] = s0[pos + 1] + w;
            s1[pos] = s1[pos + 1] + w * zi;
            s2[pos] = s2[pos + 1] + w * zi * zi;
        }
        let mut ll = 0.0;
        let mut score = 0.0;
        let mut info = 0.0;
        for &(_, first, d, sum_z) in &self.groups {
            let d = d as f64;
            let mean = s1[first] / s0[first];
            ll += beta * sum_z - d * libm::log(s0[first]);
            score += sum_z - d * mean;
            info += d * (s2[first] / s0[first] - mean * mean);
        }
        (ll, score, info)
    }

    fn baseline(&self, z: &[f64], beta: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.order.len();
        let mut s0 = alloc::vec![0.0; n + 1];
        for pos in (0..n).rev() {
            s0[pos] = s0[pos + 1] + libm::exp(beta * z[self.order[pos]]);
        }
        let mut times = Vec::with_capacity(self.groups.len());
        let mut cumhaz = Vec::with_capacity(self.groups.len());
        let mut h = 0.0;
        for &(t, first, d, _) in &self.groups {
            h += d as f64 / s0[first];
            times.push(t);
            cumhaz.push(h);
        }
        (times, cumhaz)
    }
}

fn validate(values: &[f64], events: &[u8], covariate: &[f64]) -> Result<()> {
    if values.len() != events.len() || values.len() != covariate.len() {
        return Err(Error::Usage("Cox inputs differ in length"));
    }
    if values.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            available: values.len(),
        });
    }
    if values.iter().chain(covariate).any(|v| !v.is_finite()) {
        return Err(Error::Domain("Cox inputs must be finite"));
    }
    if events.iter().any(|&e| e > 1) {
        return Err(Error::Usage("event indicators must be 0 or 1"));
    }
    if !events.contains(&1) {
        return Err(Error::InsufficientData {
            needed: 1,
            available: 0,
        });
    }
    Ok(())
}

fn centered(covariate: &[f64]) -> (f64, Vec<f64>) {
    let center = covariate.iter().sum::<f64>() / covariate.len() as f64;
    (center, covariate.iter().map(|c| c - center).collect())
}

/// Breslow partial log-likelihood at `beta`.
pub fn partial_loglik(values: &[f64], events: &[u8], covariate: &[f64], beta: f64) -> Result<f64> {
    validate(values, events, covariate)?;
    let (_, z) = centered(covariate);
    Ok(RiskSets::new(values, events, &z).evaluate(&z, beta).0)
}

/// Breslow cumulative baseline hazard (covariate at its mean) for a given
/// `beta`. At `beta = 0` this is the Nelson-Aalen estimator.
pub fn breslow_baseline(
    values: &[f64],
    events: &[u8],
    covariate: &[f64],
    beta: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    validate(values, events, covariate)?;
    let (_, z) = centered(covariate);
    Ok(RiskSets::new(values, events, &z).baseline(&z, beta))
}

/// Fits `h(t | z) = h0(t) exp(beta z)` by safeguarded Newton-Raphson.
///
/// A diverging coefficient (monotone likelihood) is returned with
/// `converged = false` rather than as an error.
pub fn cox_fit(values: &[f64], events: &[u8], covariate: &[f64]) -> Result<CoxModel> {
    validate(values, events, covariate)?;
    let (center, z) = centered(covariate);
    let spread = z.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    if spread <= 1e-12 * libm::fmax(1.0, libm::fabs(center)) {
        return Err(Error::CoxDegenerate);
    }
    let sets = RiskSets::new(values, events, &z);
    let (mut ll, mut score, mut info) = sets.evaluate(&z, 0.0);
    if !(info > 0.0) {
        return Err(Error::CoxDegenerate);
    }

    let mut beta = 0.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_NEWTON {
        if libm::fabs(score) < SCORE_TOL {
            converged = true;
            break;
        }
        iterations += 1;
        let mut step = if info > 0.0 {
            score / info
        } else {
            score.signum()
        };
        // Step-halving until the likelihood does not decrease.
        let mut accepted = false;
        for _ in 0..40 {
            let candidate = beta + step;
            let (ll_c, score_c, info_c) = sets.evaluate(&z, candidate);
            if ll_c.is_finite() && ll_c >= ll - 1e-12 * libm::fabs(ll) {
                beta = candidate;
                ll = ll_c;
                score = score_c;
                info = info_c;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted || libm::fabs(beta) > BETA_LIMIT {
            break;
        }
    }

    let (baseline_times, baseline_cumhaz) = sets.baseline(&z, beta);
    Ok(CoxModel {
        beta,
        center,
        baseline_times,
        baseline_cumhaz,
        converged: converged && libm::fabs(beta) <= BETA_LIMIT,
        iterations,
        loglik: ll,
    })
}

impl CoxModel {
    /// Builds a model from a known baseline (covariate centered at `center`).
    pub fn from_baseline(
        beta: f64,
        center: f64,
        times: Vec<f64>,
        cumhaz: Vec<f64>,
    ) -> Result<Self> {
        if times.len() != cumhaz.len() || times.is_empty() {
            return Err(Error::Usage(
                "baseline times and hazards must be non-empty and aligned",
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) || cumhaz.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Usage(
                "baseline must be increasing in time and non-decreasing",
            ));
        }
        if cumhaz[0] < 0.0 {
            return Err(Error::Usage("cumulative hazard must be non-negative"));
        }
        Ok(Self {
            beta,
            center,
            baseline_times: times,
            baseline_cumhaz: cumhaz,
            converged: true,
            iterations: 0,
            loglik: f64::NAN,
        })
    }

    #[inline]
    fn risk(&self, y: f64) -> f64 {
        libm::exp(self.beta * (y - self.center))
    }

    #[inline]
    fn cumhaz_at(&self, t: f64) -> (usize, f64) {
        let idx = self.baseline_times.partition_point(|&x| x <= t);
        let h = if idx == 0 {
            0.0
        } else {
            self.baseline_cumhaz[idx - 1]
        };
        (idx, h)
    }

    /// S(t | y) with the tail closed: zero from the last baseline time on.
    pub fn conditional_survival(&self, t: f64, y: f64) -> f64 {
        let (idx, h) = self.cumhaz_at(t);
        if idx == self.baseline_times.len() {
            0.0
        } else {
            libm::exp(-h * self.risk(y))
        }
    }

    /// Inverse-transform draw from X | X > c, Y = y for a given `u` in (0,1).
    ///
    /// Mass left after the last baseline time is placed on that time.
    pub fn conditional_quantile(&self, y: f64, c: f64, u: f64) -> Result<f64> {
        let (idx, h_c) = self.cumhaz_at(c);
        let last = self.baseline_times.len();
        if idx == last {
            return Err(Error::NoMass { cutoff: c });
        }
        // S(t)/S(c) <= u  <=>  H(t) >= H(c) - ln(u) / risk
        let r = self.risk(y);
        let threshold = h_c - libm::log(u) / r;
        let j = idx + self.baseline_cumhaz[idx..].partition_point(|&h| h < threshold);
        Ok(self.baseline_times[j.min(last - 1)])
    }

    /// Point masses of X | X > c, Y = y over the baseline times above `c`.
    pub fn conditional_masses(&self, y: f64, c: f64) -> Result<Vec<(f64, f64)>> {
        let (idx, _) = self.cumhaz_at(c);
        let last = self.baseline_times.len();
        if idx == last {
            return Err(Error::NoMass { cutoff: c });
        }
        let s_c = self.conditional_survival(c, y);
        let mut prev = s_c;
        let mut out = Vec::with_capacity(last - idx);
        for j in idx..last {
            let s = self.conditional_survival(self.baseline_times[j], y);
            out.push((self.baseline_times[j], (prev - s) / s_c));
            prev = s;
        }
        Ok(out)
    }
}

/// One draw of X given X > c and outcome y.
pub fn cox_conditional_draw(model: &CoxModel, y: f64, c: f64, rng: &mut RngStream) -> Result<f64> {
    model.conditional_quantile(y, c, rng.uniform())
}
