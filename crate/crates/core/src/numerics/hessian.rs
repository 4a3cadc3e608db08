//! Central-difference Hessians and the small symmetric solves needed to turn
//! them into standard errors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    /// Lower Cholesky factor, or `None` if the matrix is not positive definite.
    pub fn cholesky(&self) -> Option<SymMatrix> {
        let n = self.dim;
        let mut l = SymMatrix::zeros(n);
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= l.get(j, k) * l.get(j, k);
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let ljj = libm::sqrt(d);
            l.set(j, j, ljj);
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / ljj);
            }
        }
        Some(l)
    }

    /// Inverse of a symmetric positive-definite matrix.
    pub fn inverse_spd(&self) -> Option<SymMatrix> {
        let n = self.dim;
        let l = self.cholesky()?;
        let mut inv = SymMatrix::zeros(n);
        let mut col = vec![0.0; n];
        for c in 0..n {
            // Solve L z = e_c, then L^T x = z.
            for i in 0..n {
                let mut s = if i == c { 1.0 } else { 0.0 };
                for k in 0..i {
                    s -= l.get(i, k) * col[k];
                }
                col[i] = s / l.get(i, i);
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for k in (i + 1)..n {
                    s -= l.get(k, i) * col[k];
                }
                col[i] = s / l.get(i, i);
            }
            for i in 0..n {
                inv.set(i, c, col[i]);
            }
        }
        Some(inv)
    }
}

/// Finite-difference step per coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HessianStep {
    /// `h_i = rel * max(1, |x_i|)`.
    Relative(f64),
    Absolute(f64),
}

impl Default for HessianStep {
    fn default() -> Self {
        HessianStep::Relative(1e-4)
    }
}

impl HessianStep {
    fn at(self, x: f64) -> f64 {
        match self {
            HessianStep::Relative(r) => r * libm::fmax(1.0, libm::fabs(x)),
            HessianStep::Absolute(h) => h,
        }
    }
}

/// Central-difference Hessian of `objective` at `x`, symmetrized.
pub fn numeric_hessian<F>(mut objective: F, x: &[f64], step: HessianStep) -> Result<SymMatrix>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x.len();
    let h: Vec<f64> = x.iter().map(|&xi| step.at(xi)).collect();
    if h.iter().any(|&hi| !(hi > 0.0)) {
        return Err(Error::Usage("Hessian step must be positive"));
    }
    let mut point = x.to_vec();
    let mut f = |p: &[f64]| {
        let v = objective(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation)
        }
    };
    let f0 = f(&point)?;
    let mut hess = SymMatrix::zeros(n);
    for i in 0..n {
        point[i] = x[i] + h[i];
        let fp = f(&point)?;
        point[i] = x[i] - h[i];
        let fm = f(&point)?;
        point[i] = x[i];
        hess.set(i, i, (fp - 2.0 * f0 + fm) / (h[i] * h[i]));
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                point[i] = x[i] + si * h[i];
                point[j] = x[j] + sj * h[j];
                let v = f(&point);
                point[i] = x[i];
                point[j] = x[j];
                v
            };
            let fpp = corner(1.0, 1.0)?;
            let fpm = corner(1.0, -1.0)?;
            let fmp = corner(-1.0, 1.0)?;
            let fmm = corner(-1.0, -1.0)?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            hess.set(i, j, v);
            hess.set(j, i, v);
        }
    }
    // The stencil above is symmetric by construction; (H + H^T)/2 is a no-op
    // kept for matrices assembled elsewhere.
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (hess.get(i, j) + hess.get(j, i));
            hess.set(i, j, v);
            hess.set(j, i, v);
        }
    }
    Ok(hess)
}
