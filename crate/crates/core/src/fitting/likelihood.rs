//! Negative log-likelihoods over a fixed sample.
//!
//! Closed-form families reuse per-sample logarithms and, where the density
//! allows, reduce to a handful of sufficient statistics.

use crate::distributions::closed::softplus;
use crate::distributions::{DistributionSpec, Family, LogDensity};
use crate::specfun::gamma::{ln_beta_unchecked, ln_gamma_unchecked};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

pub(crate) struct Sample<'a> {
    /// Sorted values.
    xs: &'a [f64],
    /// `ln x` for positive data, empty otherwise.
    ln_x: Vec<f64>,
    n: f64,
    sum_x: f64,
    sum_x2: f64,
    sum_inv: f64,
    sum_ln: f64,
}

impl<'a> Sample<'a> {
    pub(crate) fn new(xs: &'a [f64]) -> Self {
        let positive = xs.first().is_some_and(|&x| x > 0.0);
        let ln_x: Vec<f64> = if positive {
            xs.iter().map(|x| x.ln()).collect()
        } else {
            Vec::new()
        };
        Self {
            xs,
            n: xs.len() as f64,
            sum_x: xs.iter().sum(),
            sum_x2: xs.iter().map(|x| x * x).sum(),
            sum_inv: if positive {
                xs.iter().map(|x| 1.0 / x).sum()
            } else {
                0.0
            },
            sum_ln: ln_x.iter().sum(),
            ln_x,
        }
    }

    /// `-Σ ln f(x)`, or `+∞` for invalid parameters or a zero density.
    pub(crate) fn neg_log_likelihood(&self, family: Family, params: Vec<f64>) -> f64 {
        let Ok(spec) = DistributionSpec::new(family, params) else {
            return f64::INFINITY;
        };
        let v = self.closed(&spec).unwrap_or_else(|| self.general(&spec));
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    fn general(&self, spec: &DistributionSpec) -> f64 {
        let xs = self.xs;
        let Ok(dens) = LogDensity::new(spec, xs[0], xs[xs.len() - 1]) else {
            return f64::INFINITY;
        };
        let mut sum = 0.0;
        for &x in xs {
            let v = dens.ln_pdf(x);
            if !v.is_finite() {
                return f64::INFINITY;
            }
            sum += v;
        }
        -sum
    }

    fn closed(&self, spec: &DistributionSpec) -> Option<f64> {
        let p = spec.params();
        let n = self.n;
        let ll = match spec.family() {
            Family::Ga => {
                let (a, b) = (p[0], p[1]);
                -n * (ln_gamma_unchecked(a) + a * b.ln()) + (a - 1.0) * self.sum_ln - self.sum_x / b
            }
            Family::IGa => {
                let (a, b) = (p[0], p[1]);
                n * (a * b.ln() - ln_gamma_unchecked(a)) - (a + 1.0) * self.sum_ln - b * self.sum_inv
            }
            Family::GGa => {
                let (a, b, g) = (p[0], p[1], p[2]);
                let lb = b.ln();
                let s: f64 = self.ln_x.iter().map(|l| (g * (l - lb)).exp()).sum();
                n * (g.ln() - lb - ln_gamma_unchecked(a)) + (a * g - 1.0) * (self.sum_ln - n * lb) - s
            }
            Family::GIGa => {
                let (a, b, g) = (p[0], p[1], p[2]);
                let lb = b.ln();
                let s: f64 = self.ln_x.iter().map(|l| (g * (lb - l)).exp()).sum();
                n * (g.ln() - lb - ln_gamma_unchecked(a)) + (1.0 + a * g) * (n * lb - self.sum_ln) - s
            }
            Family::BP => self.gb2(p[0], p[1], 1.0, p[2]),
            Family::GB2 => self.gb2(p[0], p[1], p[2], p[3]),
            Family::N => {
                let (mu, sigma) = (p[0], p[1]);
                let ss = self.sum_x2 - 2.0 * mu * self.sum_x + n * mu * mu;
                -0.5 * ss / (sigma * sigma) - n * (sigma.ln() + LN_SQRT_2PI)
            }
            Family::GST => {
                let (mu, sigma, nu) = (p[0], p[1], p[2]);
                let k = 1.0 / (nu * sigma * sigma);
                let s: f64 = self.xs.iter().map(|x| ((x - mu) * (x - mu) * k).ln_1p()).sum();
                -0.5 * (nu + 1.0) * s - n * (0.5 * nu.ln() + sigma.ln() + ln_beta_unchecked(0.5 * nu, 0.5))
            }
            Family::S | Family::GCHU => return None,
        };
        Some(if ll.is_finite() { -ll } else { f64::INFINITY })
    }

    fn gb2(&self, p: f64, q: f64, a: f64, b: f64) -> f64 {
        let lb = b.ln();
        let s: f64 = self.ln_x.iter().map(|l| softplus(a * (l - lb))).sum();
        self.n * (a.ln() - lb - ln_beta_unchecked(p, q)) + (p * a - 1.0) * (self.sum_ln - self.n * lb) - (p + q) * s
    }
}
