//! Survival and combination routines against brute-force re-derivations.

use censcov_core::estimators::rubin_combine;
use censcov_core::numerics::RngStream;
use censcov_core::simulation::summarize_method;
use censcov_core::survival::{
    breslow_baseline, cox_fit, km_fit, partial_loglik, CoxModel, TailRule,
};
use censcov_core::Method;

/// S(t) straight from the definition: product over distinct event values
/// u <= t of (1 - d(u) / r(u)), with r counting every value >= u.
fn km_brute(values: &[f64], events: &[u8], t: f64, efron: bool) -> f64 {
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let is_event = |i: usize| events[i] == 1 || (efron && values[i] == max);
    let mut times: Vec<f64> = (0..values.len())
        .filter(|&i| is_event(i))
        .map(|i| values[i])
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut s = 1.0;
    for u in times.into_iter().filter(|&u| u <= t) {
        let r = values.iter().filter(|&&v| v >= u).count() as f64;
        let d = (0..values.len())
            .filter(|&i| values[i] == u && is_event(i))
            .count() as f64;
        s *= 1.0 - d / r;
    }
    s
}

fn random_survival_data(rng: &mut RngStream, n: usize) -> (Vec<f64>, Vec<u8>) {
    // Coarse grid so ties are common.
    let values: Vec<f64> = (0..n).map(|_| (rng.index(12) + 1) as f64 * 0.5).collect();
    let events: Vec<u8> = (0..n).map(|_| u8::from(rng.uniform() < 0.6)).collect();
    (values, events)
}

#[test]
fn km_matches_definition() {
    let mut rng = RngStream::new(101, 0);
    for _ in 0..200 {
        let n = 1 + rng.index(25);
        let (values, events) = random_survival_data(&mut rng, n);
        for (rule, efron) in [(TailRule::EfronEvent, true), (TailRule::None, false)] {
            let curve = km_fit(&values, &events, rule).unwrap();
            for k in 0..30 {
                let t = k as f64 * 0.25;
                let want = km_brute(&values, &events, t, efron);
                assert!((curve.survival_at(t) - want).abs() < 1e-12, "t={t}");
            }
        }
    }
}

#[test]
fn conditional_mean_matches_mass_weighted_mean() {
    let mut rng = RngStream::new(102, 0);
    for _ in 0..200 {
        let n = 2 + rng.index(25);
        let (values, events) = random_survival_data(&mut rng, n);
        let curve = km_fit(&values, &events, TailRule::EfronEvent).unwrap();
        let c = rng.uniform() * 6.5;
        let s_c = km_brute(&values, &events, c, true);
        let got = curve.conditional_mean(c);
        if s_c == 0.0 {
            assert!(got.is_err());
            continue;
        }
        // Sum of t * P(X = t) over support points above c, divided by S(c).
        let mut support: Vec<f64> = values.iter().copied().filter(|&v| v > c).collect();
        support.sort_by(f64::total_cmp);
        support.dedup();
        let mut prev = s_c;
        let mut num = 0.0;
        for t in support {
            let s = km_brute(&values, &events, t, true);
            num += t * (prev - s);
            prev = s;
        }
        let want = num / s_c;
        assert!((got.unwrap() - want).abs() < 1e-10, "c={c}");
    }
}

/// Breslow partial log-likelihood straight from the definition.
fn partial_loglik_brute(values: &[f64], events: &[u8], z: &[f64], beta: f64) -> f64 {
    let mean = z.iter().sum::<f64>() / z.len() as f64;
    let mut ll = 0.0;
    for i in 0..values.len() {
        if events[i] == 1 {
            let risk: f64 = (0..values.len())
                .filter(|&j| values[j] >= values[i])
                .map(|j| (beta * (z[j] - mean)).exp())
                .sum();
            ll += beta * (z[i] - mean) - risk.ln();
        }
    }
    ll
}

#[test]
fn cox_matches_grid_search() {
    let mut rng = RngStream::new(103, 0);
    let mut checked = 0;
    while checked < 30 {
        let n = 6 + rng.index(20);
        let (values, mut events) = random_survival_data(&mut rng, n);
        events[0] = 1;
        let z: Vec<f64> = (0..n).map(|i| values[i] * 0.3 + rng.uniform()).collect();
        let Ok(model) = cox_fit(&values, &events, &z) else {
            continue;
        };
        if !model.converged {
            continue;
        }
        for beta in [-1.0, 0.0, 0.7] {
            let a = partial_loglik(&values, &events, &z, beta).unwrap();
            let b = partial_loglik_brute(&values, &events, &z, beta);
            assert!((a - b).abs() < 1e-10);
        }
        let f = |b: f64| partial_loglik_brute(&values, &events, &z, b);
        let mut best = (-10.0, f(-10.0));
        let mut b = -10.0;
        while b <= 10.0 {
            let v = f(b);
            if v > best.1 {
                best = (b, v);
            }
            b += 1e-2;
        }
        let (lo, hi) = (best.0 - 1e-2, best.0 + 1e-2);
        let mut b = lo;
        while b <= hi {
            let v = f(b);
            if v > best.1 {
                best = (b, v);
            }
            b += 1e-6;
        }
        assert!(
            (model.beta - best.0).abs() < 1e-4,
            "{} vs {}",
            model.beta,
            best.0
        );
        checked += 1;
    }
}

#[test]
fn breslow_at_zero_is_nelson_aalen_and_cox_draws_follow_masses() {
    let mut rng = RngStream::new(104, 0);
    let (values, mut events) = random_survival_data(&mut rng, 30);
    events[3] = 1;
    let z: Vec<f64> = (0..30).map(|_| rng.uniform()).collect();
    let (times, cumhaz) = breslow_baseline(&values, &events, &z, 0.0).unwrap();
    let mut h = 0.0;
    for (t, got) in times.iter().zip(&cumhaz) {
        let r = values.iter().filter(|&&v| v >= *t).count() as f64;
        let d = (0..30)
            .filter(|&i| values[i] == *t && events[i] == 1)
            .count() as f64;
        h += d / r;
        assert!((got - h).abs() < 1e-12);
    }

    // Quadrature-free check of the sampler: the empirical mean of draws
    // against the exact conditional mean from the point masses.
    let model =
        CoxModel::from_baseline(0.5, 0.0, vec![1.0, 2.0, 3.0, 4.0], vec![0.2, 0.5, 0.9, 1.4])
            .unwrap();
    let (y, c) = (1.0, 1.5);
    let masses = model.conditional_masses(y, c).unwrap();
    let mean: f64 = masses.iter().map(|(t, p)| t * p).sum();
    let var: f64 = masses.iter().map(|(t, p)| (t - mean).powi(2) * p).sum();
    let k = 20_000;
    let mut draws = RngStream::new(105, 0);
    let total: f64 = (0..k)
        .map(|_| model.conditional_quantile(y, c, draws.uniform()).unwrap())
        .sum();
    let emp = total / k as f64;
    assert!(
        (emp - mean).abs() < 3.0 * (var / k as f64).sqrt(),
        "{emp} vs {mean}"
    );
}

#[test]
fn rubin_by_hand() {
    let c = rubin_combine(&[0.4, 0.6], &[0.01, 0.01]).unwrap();
    assert!((c.estimate - 0.5).abs() < 1e-15);
    assert!((c.between_var - 0.02).abs() < 1e-15);
    assert!((c.total_var - (0.01 + 1.5 * 0.02)).abs() < 1e-15);
    let c = rubin_combine(&[0.5; 3], &[0.04; 3]).unwrap();
    assert_eq!((c.estimate, c.between_var), (0.5, 0.0));
    assert!((c.total_var - 0.04).abs() < 1e-15);
    assert!(rubin_combine(&[0.5], &[0.04]).is_err());
}

#[test]
fn summarize_by_hand() {
    let r = summarize_method(Method::Mle, &[0.5, 0.5], &[0.1, 0.1], 0.5).unwrap();
    assert_eq!(
        (r.bias, r.emp_se, r.mse(), r.coverage),
        (0.0, 0.0, 0.0, 1.0)
    );
    let r = summarize_method(Method::Mle, &[0.4, 0.6], &[0.02, 0.02], 0.5).unwrap();
    assert!(r.bias.abs() < 1e-15);
    assert!((r.emp_se - 0.1414).abs() < 1e-4);
    assert_eq!(r.coverage, 0.0);
}
