//! Closed-form densities and distribution functions.

use super::Family;
use crate::error::Result;
use crate::specfun::gamma::{ln_beta_unchecked, ln_gamma_unchecked};
use crate::specfun::incomplete::inc_gamma_pq;
use crate::specfun::{erfc, reg_inc_beta_pair};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln(1 + e^t)` without overflow.
pub(crate) fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

pub(crate) fn ln_pdf(family: Family, p: &[f64], x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    match family {
        Family::GB2 => {
            if x <= 0.0 || x.is_infinite() {
                return f64::NEG_INFINITY;
            }
            gb2_ln_pdf(p[0], p[1], p[2], p[3], x)
        }
        Family::BP => {
            if x <= 0.0 || x.is_infinite() {
                return f64::NEG_INFINITY;
            }
            gb2_ln_pdf(p[0], p[1], 1.0, p[2], x)
        }
        Family::GIGa => {
            if x <= 0.0 || x.is_infinite() {
                return f64::NEG_INFINITY;
            }
            giga_ln_pdf(p[0], p[1], p[2], x)
        }
        Family::IGa => {
            if x <= 0.0 || x.is_infinite() {
                return f64::NEG_INFINITY;
            }
            giga_ln_pdf(p[0], p[1], 1.0, x)
        }
        Family::GGa => {
            if x <= 0.0 || x.is_infinite() {
                return f64::NEG_INFINITY;
            }
            gga_ln_pdf(p[0], p[1], p[2], x)
        }
        Family::Ga => {
            if x <= 0.0 || x.is_infinite() {
                return f64::NEG_INFINITY;
            }
            gga_ln_pdf(p[0], p[1], 1.0, x)
        }
        Family::N => {
            if x.is_infinite() {
                return f64::NEG_INFINITY;
            }
            let t = (x - p[0]) / p[1];
            -0.5 * t * t - p[1].ln() - LN_SQRT_2PI
        }
        Family::GST => {
            if x.is_infinite() {
                return f64::NEG_INFINITY;
            }
            let (mu, sigma, nu) = (p[0], p[1], p[2]);
            let t = (x - mu) / sigma;
            -0.5 * (nu + 1.0) * (t * t / nu).ln_1p() - 0.5 * nu.ln() - sigma.ln() - ln_beta_unchecked(0.5 * nu, 0.5)
        }
        Family::S | Family::GCHU => unreachable!("not a closed-form family"),
    }
}

pub(crate) fn gb2_ln_pdf(p: f64, q: f64, alpha: f64, beta: f64, x: f64) -> f64 {
    let y = (x / beta).ln();
    alpha.ln() - beta.ln() - ln_beta_unchecked(p, q) + (p * alpha - 1.0) * y - (p + q) * softplus(alpha * y)
}

pub(crate) fn giga_ln_pdf(alpha: f64, beta: f64, gamma: f64, x: f64) -> f64 {
    let w = (beta / x).ln();
    gamma.ln() - beta.ln() - ln_gamma_unchecked(alpha) + (1.0 + alpha * gamma) * w - (gamma * w).exp()
}

pub(crate) fn gga_ln_pdf(alpha: f64, beta: f64, gamma: f64, x: f64) -> f64 {
    let y = (x / beta).ln();
    gamma.ln() - beta.ln() - ln_gamma_unchecked(alpha) + (alpha * gamma - 1.0) * y - (gamma * y).exp()
}

/// `I_u(p, q)` with `u = y/(1+y)`, `y = (x/β)^α`, computed from `t = α ln(x/β)`.
fn gb2_cdf(p: f64, q: f64, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let t = alpha * (x / beta).ln();
    let u = 1.0 / (1.0 + (-t).exp());
    let v = 1.0 / (1.0 + t.exp());
    Ok(reg_inc_beta_pair(p, q, u, v)?.0)
}

pub(crate) fn cdf(family: Family, p: &[f64], x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(crate::Error::Domain("cdf evaluated at NaN".into()));
    }
    match family {
        Family::GB2 => gb2_cdf(p[0], p[1], p[2], p[3], x),
        Family::BP => gb2_cdf(p[0], p[1], 1.0, p[2], x),
        Family::GIGa | Family::IGa => {
            if x <= 0.0 {
                return Ok(0.0);
            }
            let gamma = if family == Family::GIGa { p[2] } else { 1.0 };
            let arg = (gamma * (p[1] / x).ln()).exp();
            Ok(inc_gamma_pq(p[0], arg).1)
        }
        Family::GGa | Family::Ga => {
            if x <= 0.0 {
                return Ok(0.0);
            }
            let gamma = if family == Family::GGa { p[2] } else { 1.0 };
            let arg = (gamma * (x / p[1]).ln()).exp();
            Ok(inc_gamma_pq(p[0], arg).0)
        }
        Family::N => Ok(0.5 * erfc(-(x - p[0]) / (p[1] * std::f64::consts::SQRT_2))),
        Family::GST => {
            let (mu, sigma, nu) = (p[0], p[1], p[2]);
            let t = (x - mu) / sigma;
            if t.is_infinite() {
                return Ok(if t > 0.0 { 1.0 } else { 0.0 });
            }
            let t2 = t * t;
            let w = nu / (nu + t2);
            let wc = t2 / (nu + t2);
            let tail = 0.5 * reg_inc_beta_pair(0.5 * nu, 0.5, w, wc)?.0;
            Ok(if t < 0.0 { tail } else { 1.0 - tail })
        }
        Family::S | Family::GCHU => unreachable!("not a closed-form family"),
    }
}
