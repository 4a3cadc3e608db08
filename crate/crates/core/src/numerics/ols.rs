use crate::error::{Error, Result};

/// Simple linear regression fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlsFit {
    pub beta0: f64,
    pub beta1: f64,
    pub se_beta0: f64,
    pub se_beta1: f64,
    /// Residual standard deviation with an `n - 2` denominator.
    pub sigma_hat: f64,
}

/// Least-squares fit of `ys` on `xs` with an intercept.
pub fn ols_fit(xs: &[f64], ys: &[f64]) -> Result<OlsFit> {
    if xs.len() != ys.len() {
        return Err(Error::Usage("xs and ys differ in length"));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            available: n,
        });
    }
    let nf = n as f64;
    let x_bar = xs.iter().sum::<f64>() / nf;
    let y_bar = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut sum_x2 = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - x_bar;
        sxx += dx * dx;
        sxy += dx * (y - y_bar);
        sum_x2 += x * x;
    }
    if !(sxx > 1e-14 * sum_x2) || !sxx.is_finite() {
        return Err(Error::DegenerateDesign);
    }
    let beta1 = sxy / sxx;
    let beta0 = y_bar - beta1 * x_bar;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - beta0 - beta1 * x;
            r * r
        })
        .sum();
    let s2 = rss / (nf - 2.0);
    Ok(OlsFit {
        beta0,
        beta1,
        se_beta0: libm::sqrt(s2 * (1.0 / nf + x_bar * x_bar / sxx)),
        se_beta1: libm::sqrt(s2 / sxx),
        sigma_hat: libm::sqrt(s2),
    })
}
