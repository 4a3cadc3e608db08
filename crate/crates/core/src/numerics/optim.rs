//! Derivative-free minimization (Nelder-Mead simplex).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Converged once `f(worst) - f(best) < tol` across the simplex...
    pub tol: f64,
    /// ...and every vertex is within `xtol * max(|x_i|, 1)` of the best one.
    pub xtol: f64,
    /// Budget of simplex iterations, shared across restarts.
    pub max_iter: usize,
    /// Initial edge length relative to `max(|x_i|, 1)`.
    pub initial_step: f64,
    /// Fresh-simplex restarts after a converged run.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            xtol: 1e-8,
            max_iter: 5000,
            initial_step: 0.05,
            restarts: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub x_min: Vec<f64>,
    pub f_min: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Minimizes `objective` starting from `x0`.
///
/// Non-finite objective values inside the run are treated as `+inf`, so the
/// simplex simply walks away from them. Running out of budget is reported
/// through `converged = false`, not as an error.
pub fn minimize<F>(mut objective: F, x0: &[f64], options: NelderMeadOptions) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> f64,
{
    if x0.is_empty() {
        return Err(Error::Usage("empty starting point"));
    }
    let f0 = objective(x0);
    if !f0.is_finite() {
        return Err(Error::Start);
    }
    let mut eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut best = x0.to_vec();
    let mut f_best = f0;
    let mut used = 0;
    let mut converged = false;
    for attempt in 0..=options.restarts {
        let run = simplex_run(&mut eval, &best, f_best, options, options.max_iter - used);
        used += run.iterations;
        let improvement = f_best - run.f_min;
        if run.f_min <= f_best {
            best = run.x_min;
            f_best = run.f_min;
        }
        converged = run.converged;
        // A restart that cannot improve on the previous optimum confirms it.
        if !converged || (attempt > 0 && improvement < options.tol) || used >= options.max_iter {
            break;
        }
    }
    Ok(OptimResult {
        x_min: best,
        f_min: f_best,
        converged,
        iterations: used,
    })
}

fn simplex_run<F>(
    eval: &mut F,
    x0: &[f64],
    f0: f64,
    options: NelderMeadOptions,
    budget: usize,
) -> OptimResult
where
    F: FnMut(&[f64]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let dim = x0.len();
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut values: Vec<f64> = Vec::with_capacity(dim + 1);
    points.push(x0.to_vec());
    values.push(f0);
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += options.initial_step * libm::fmax(libm::fabs(x0[i]), 1.0);
        values.push(eval(&p));
        points.push(p);
    }

    let mut order: Vec<usize> = (0..=dim).collect();
    let mut centroid = vec![0.0; dim];
    let mut trial = vec![0.0; dim];
    let mut trial2 = vec![0.0; dim];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < budget {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[dim];
        let second = order[dim - 1];
        if values[worst] - values[best] < options.tol && diameter_ok(&points, best, options.xtol) {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &idx in &order[..dim] {
            for (c, p) in centroid.iter_mut().zip(&points[idx]) {
                *c += p;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= dim as f64);

        for j in 0..dim {
            trial[j] = centroid[j] + REFLECT * (centroid[j] - points[worst][j]);
        }
        let f_reflect = eval(&trial);

        if f_reflect < values[best] {
            for j in 0..dim {
                trial2[j] = centroid[j] + EXPAND * (trial[j] - centroid[j]);
            }
            let f_expand = eval(&trial2);
            if f_expand < f_reflect {
                points[worst].copy_from_slice(&trial2);
                values[worst] = f_expand;
            } else {
                points[worst].copy_from_slice(&trial);
                values[worst] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[second] {
            points[worst].copy_from_slice(&trial);
            values[worst] = f_reflect;
            continue;
        }

        // Contraction, outside when the reflection helped at all.
        let outside = f_reflect < values[worst];
        for j in 0..dim {
            trial2[j] = if outside {
                centroid[j] + CONTRACT * (trial[j] - centroid[j])
            } else {
                centroid[j] + CONTRACT * (points[worst][j] - centroid[j])
            };
        }
        let f_contract = eval(&trial2);
        let accept = if outside {
            f_contract <= f_reflect
        } else {
            f_contract < values[worst]
        };
        if accept {
            points[worst].copy_from_slice(&trial2);
            values[worst] = f_contract;
            continue;
        }

        let anchor = points[best].clone();
        for &idx in &order[1..] {
            for j in 0..dim {
                points[idx][j] = anchor[j] + SHRINK * (points[idx][j] - anchor[j]);
            }
            values[idx] = eval(&points[idx]);
        }
    }

    let (best_idx, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("simplex is non-empty");
    OptimResult {
        x_min: points[best_idx].clone(),
        f_min: values[best_idx],
        converged,
        iterations,
    }
}

fn diameter_ok(points: &[Vec<f64>], best: usize, xtol: f64) -> bool {
    let anchor = &points[best];
    points.iter().all(|p| {
        p.iter()
            .zip(anchor)
            .all(|(a, b)| libm::fabs(a - b) <= xtol * libm::fmax(libm::fabs(*b), 1.0))
    })
}
