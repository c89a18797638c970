//! Fit of `c · k^(b-1) · e^(-a k)` to an autocorrelation curve.
//!
//! For fixed `(a, b)` the model is linear in `c`, so `c` is profiled out by
//! least squares and the simplex runs over `(ln a, b)` only.

use serde::{Deserialize, Serialize};

use super::simplex::{minimize, SimplexOptions};
use crate::error::{Error, Result};
use crate::volseries::AcfCurve;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcfFit {
    /// Decay rate per lag.
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub residual_sse: f64,
}

impl AcfFit {
    pub fn eval(&self, lag: f64) -> f64 {
        self.c * lag.powf(self.b - 1.0) * (-self.a * lag).exp()
    }
}

pub const MIN_LAGS: usize = 10;

/// Best `c` and the residual sum of squares for fixed `(a, b)`.
fn profile(lags: &[f64], ys: &[f64], yy: f64, a: f64, b: f64) -> (f64, f64) {
    let (mut sfy, mut sff) = (0.0, 0.0);
    for (&k, &y) in lags.iter().zip(ys) {
        let f = ((b - 1.0) * k.ln() - a * k).exp();
        sfy += f * y;
        sff += f * f;
    }
    if !(sff > 0.0) || !sff.is_finite() {
        return (0.0, f64::INFINITY);
    }
    let c = sfy / sff;
    (c, (yy - sfy * sfy / sff).max(0.0))
}

pub fn acf_fit(curve: &AcfCurve) -> Result<AcfFit> {
    if curve.lags.len() < MIN_LAGS || curve.lags.len() != curve.values.len() {
        return Err(Error::Data(format!(
            "ACF fit needs at least {MIN_LAGS} lags, got {}",
            curve.lags.len()
        )));
    }
    if curve.lags.contains(&0) {
        return Err(Error::Data("ACF fit lags must be positive".into()));
    }
    let lags: Vec<f64> = curve.lags.iter().map(|&k| k as f64).collect();
    let ys = &curve.values;
    let yy: f64 = ys.iter().map(|y| y * y).sum();
    let sse = |t: &[f64]| profile(&lags, ys, yy, t[0].exp(), t[1]).1;
    // residual computed directly, free of the cancellation in the profile shortcut
    let direct = |a: f64, b: f64| -> (f64, f64) {
        let (c, _) = profile(&lags, ys, yy, a, b);
        let r = lags
            .iter()
            .zip(ys)
            .map(|(&k, &y)| {
                let e = y - c * ((b - 1.0) * k.ln() - a * k).exp();
                e * e
            })
            .sum();
        (c, r)
    };
    let objective = |t: &[f64]| direct(t[0].exp(), t[1]).1;
    let k_max = lags.iter().copied().fold(1.0, f64::max);
    let mut start = [(-(k_max.ln())), 1.0];
    let mut best = f64::INFINITY;
    for i in 0..=40 {
        let la = -(k_max.ln()) - 4.0 + 8.0 * i as f64 / 40.0;
        for j in 0..=20 {
            let b = 0.1 * j as f64;
            let v = sse(&[la, b]);
            if v < best {
                best = v;
                start = [la, b];
            }
        }
    }
    let opts = SimplexOptions {
        max_evals: 4000,
        f_tol: 1e-12,
        f_abs: 1e-30,
        x_tol: 1e-10,
    };
    let mut r = minimize(objective, &start, &[0.2, 0.1], &opts);
    for _ in 0..3 {
        let again = minimize(objective, &r.x, &[0.01, 0.01], &opts);
        let done = !(again.f < r.f);
        if again.f <= r.f {
            r = again;
        }
        if done {
            break;
        }
    }
    let (a, b) = (r.x[0].exp(), r.x[1]);
    let (c, residual_sse) = direct(a, b);
    let fit = AcfFit { a, b, c, residual_sse };
    if !r.converged {
        return Err(Error::Numerical(format!(
            "ACF fit did not converge; best effort a={a}, b={b}, c={c}, sse={residual_sse}"
        )));
    }
    Ok(fit)
}
