//! The Tricomi-U density
//! `Γ(q+½) U(q+½, 3/2-p, (x-μ)²/(2σ²)) / (√(2π) σ B(p, q))`.
//!
//! It is the normal variance mixture `x | v ~ N(μ, v)`, `v ~ BP(p, q, σ²)`,
//! which is what the sampler uses.

use crate::error::Result;
use crate::quad::{gauss_kronrod, upper_tail, QuadratureConfig};
use crate::specfun::gamma::{ln_beta_unchecked, ln_gamma_unchecked};
use crate::specfun::ln_tricomi_u;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const CDF_CFG: QuadratureConfig = QuadratureConfig {
    rel_tol: 1e-10,
    abs_tol: 1e-13,
    max_subdivisions: 400,
};

/// Constant part of the log-density: `ln Γ(q+½) - ln √(2π) - ln σ - ln B(p, q)`.
pub(crate) fn ln_norm(p: f64, q: f64, sigma: f64) -> f64 {
    ln_gamma_unchecked(q + 0.5) - LN_SQRT_2PI - sigma.ln() - ln_beta_unchecked(p, q)
}

pub(crate) fn ln_pdf(p: f64, q: f64, sigma: f64, mu: f64, x: f64, cfg: &QuadratureConfig) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return f64::NEG_INFINITY;
    }
    let t = (x - mu) / sigma;
    let z = 0.5 * t * t;
    let (a, b) = (q + 0.5, 1.5 - p);
    if z == 0.0 && b >= 1.0 {
        return f64::INFINITY;
    }
    match ln_tricomi_u(a, b, z, cfg) {
        Ok(lu) => ln_norm(p, q, sigma) + lu,
        Err(_) => f64::NAN,
    }
}

pub(crate) fn cdf(p: f64, q: f64, sigma: f64, mu: f64, x: f64) -> Result<f64> {
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let d = (x - mu).abs();
    if d == 0.0 {
        return Ok(0.5);
    }
    let cfg = QuadratureConfig::default();
    let f = |y: f64| {
        let v = ln_pdf(p, q, sigma, mu, y, &cfg).exp();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    // mass of [mu + d, ∞), by symmetry also that of (-∞, mu - d]
    let tail = if d <= 10.0 * sigma {
        let core = gauss_kronrod(f, mu, mu + d, &CDF_CFG).into_result("GCHU cdf")?;
        0.5 - core
    } else {
        upper_tail(f, mu + d, &CDF_CFG).into_result("GCHU cdf")?
    };
    let tail = tail.clamp(0.0, 0.5);
    Ok(if x > mu { 1.0 - tail } else { tail })
}
