//! Log-likelihood of the normal-covariate model with a right-censored
//! covariate.

use crate::domain::{CensoredDataset, LikelihoodTerms, MleParams};
use crate::error::Result;
use crate::numerics::normal::{log_cdf, log_std_normal_pdf};

/// ln(2 pi)
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Joint log-density of `(y, x)` for a fully observed row.
#[inline]
pub fn observed_term(params: &MleParams, y: f64, x: f64) -> f64 {
    let eps = y - params.beta0 - params.beta1 * x;
    log_std_normal_pdf(eps / params.sigma) - libm::log(params.sigma)
        + log_std_normal_pdf((x - params.mu_x) / params.sigma_x)
        - libm::log(params.sigma_x)
}

/// `ln f(y, X > c)`: the marginal density of `Y` times `P(X > c | Y = y)`.
#[inline]
pub fn censored_term(params: &MleParams, y: f64, c: f64) -> f64 {
    let t = LikelihoodTerms::new(params, y, c);
    let s2 = params.sigma * params.sigma;
    let sq2 = s2 * t.q * t.q;
    let var_y = s2 + params.beta1 * params.beta1 * params.sigma_x * params.sigma_x;
    // 1 - b1^2 / (s^2 Q^2) simplifies to s^2 / var_y.
    -0.5 * (LN_2PI + libm::log(var_y)) - 0.5 * t.eps_mu * t.eps_mu / var_y
        + log_cdf(t.q * (params.mu_x + params.beta1 * t.eps_mu / sq2 - c))
}

/// Sum of per-row contributions, each row weighted by its own status.
pub fn censored_loglik(params: &MleParams, ds: &CensoredDataset) -> Result<f64> {
    params.validate()?;
    Ok(loglik_unchecked(params, ds))
}

pub(crate) fn loglik_unchecked(params: &MleParams, ds: &CensoredDataset) -> f64 {
    ds.records()
        .iter()
        .map(|r| {
            if r.is_observed() {
                observed_term(params, r.y, r.v)
            } else {
                censored_term(params, r.y, r.v)
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Observation;
    use crate::numerics::normal::cdf;
    use alloc::vec::Vec;

    fn params() -> MleParams {
        MleParams::new(1.0, 0.5, 1.0, 0.3, 0.4).unwrap()
    }

    /// Adaptive Simpson integration.
    fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
            let m = 0.5 * (a + b);
            let fm = f(m);
            (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
        }
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            fa: f64,
            b: f64,
            fb: f64,
            m: f64,
            fm: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let (lm, flm, left) = simpson(f, a, fa, m, fm);
            let (rm, frm, right) = simpson(f, m, fm, b, fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
                + rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
        }
        let (fa, fb) = (f(a), f(b));
        let (m, fm, whole) = simpson(f, a, fa, b, fb);
        rec(f, a, fa, b, fb, m, fm, whole, tol, 50)
    }

    #[test]
    fn fully_observed_is_bivariate_density() {
        let p = params();
        let rows: Vec<(f64, f64)> = (0..20)
            .map(|i| (0.2 * i as f64 - 1.0, 0.05 * i as f64))
            .collect();
        let ds = CensoredDataset::new(
            rows.iter()
                .map(|&(y, x)| Observation::new(y, x, 1).unwrap())
                .collect(),
        )
        .unwrap();
        let direct: f64 = rows
            .iter()
            .map(|&(y, x)| {
                let e = y - 1.0 - 0.5 * x;
                let z = (x - 0.3) / 0.4;
                let dens = libm::exp(-0.5 * e * e) / libm::sqrt(2.0 * core::f64::consts::PI)
                    * libm::exp(-0.5 * z * z)
                    / (0.4 * libm::sqrt(2.0 * core::f64::consts::PI));
                libm::log(dens)
            })
            .sum();
        let got = censored_loglik(&p, &ds).unwrap();
        assert!((got - direct).abs() < 1e-10, "{got} vs {direct}");
    }

    #[test]
    fn far_left_cutoff_gives_marginal_of_y() {
        let p = params();
        let c = p.mu_x - 50.0 * p.sigma_x;
        for y in [-2.0, 0.0, 1.15, 3.0] {
            let var_y = 1.0 + 0.25 * 0.16;
            let mean_y = 1.0 + 0.5 * 0.3;
            let want = -0.5 * libm::log(2.0 * core::f64::consts::PI * var_y)
                - (y - mean_y) * (y - mean_y) / (2.0 * var_y);
            assert!((censored_term(&p, y, c) - want).abs() < 1e-8);
        }
    }

    #[test]
    fn censored_density_integrates_to_tail_probability() {
        for &(b1, c) in &[(0.5, 0.3), (-1.2, 0.9), (0.0, -0.1), (3.0, 1.4)] {
            let p = MleParams::new(1.0, b1, 0.7, 0.3, 0.4).unwrap();
            let f = |y: f64| libm::exp(censored_term(&p, y, c));
            let sd = libm::sqrt(0.49 + b1 * b1 * 0.16);
            let mid = 1.0 + b1 * 0.3;
            let total = integrate(&f, mid - 14.0 * sd, mid + 14.0 * sd, 1e-12);
            let want = 1.0 - cdf((c - 0.3) / 0.4);
            assert!(
                (total - want).abs() < 1e-6,
                "b1={b1} c={c}: {total} vs {want}"
            );
        }
    }

    #[test]
    fn finite_far_in_the_tail() {
        let p = MleParams::new(0.0, 5.0, 0.01, 0.0, 0.01).unwrap();
        let v = censored_term(&p, -100.0, 10.0);
        assert!(v.is_finite());
    }

    #[test]
    fn invalid_params_are_rejected() {
        let ds = CensoredDataset::new(alloc::vec![Observation::new(1.0, 1.0, 0).unwrap()]).unwrap();
        let p = MleParams {
            beta0: 0.0,
            beta1: f64::NAN,
            sigma: 1.0,
            mu_x: 0.0,
            sigma_x: 1.0,
        };
        assert!(censored_loglik(&p, &ds).is_err());
    }

    proptest::proptest! {
        #[test]
        fn row_order_invariant(
            rows in proptest::collection::vec((-3.0f64..3.0, 0.0f64..2.0, 0u8..2), 1..30),
            seed in 0u64..1000,
        ) {
            let p = params();
            let recs: Vec<Observation> = rows.iter().map(|&(y, v, d)| Observation::new(y, v, d).unwrap()).collect();
            let mut shuffled = recs.clone();
            let mut rng = crate::numerics::RngStream::new(seed, 0);
            for i in (1..shuffled.len()).rev() {
                let j = rng.index(i + 1);
                shuffled.swap(i, j);
            }
            let a = censored_loglik(&p, &CensoredDataset::new(recs).unwrap()).unwrap();
            let b = censored_loglik(&p, &CensoredDataset::new(shuffled).unwrap()).unwrap();
            proptest::prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
        }
    }
}
