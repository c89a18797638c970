//! Stable densities in Nolan's S0 parameterization.
//!
//! `X ~ S(α, β, γ, δ; 0)` iff `(X - δ)/γ ~ S(α, β, 1, 0; 0)`, so everything
//! reduces to the standardized density, computed from Zolotarev's
//! single-integral representation (Nolan 1997). The integrand
//! `g(θ) e^{-g(θ)}` peaks where `g = 1`; the integral is split there.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;
use crate::quad::{gauss_kronrod, lower_tail, upper_tail, QuadratureConfig};
use crate::specfun::gamma::ln_gamma_unchecked;

/// `|α - 1|` below which α is treated as exactly 1.
pub(crate) const ALPHA_ONE_SNAP: f64 = 1e-4;
/// Beyond `(x - ζ)^α > TAIL_SWITCH` the leading tail asymptote is used.
const TAIL_SWITCH: f64 = 1e11;

const INTEGRAND_CFG: QuadratureConfig = QuadratureConfig {
    rel_tol: 1e-10,
    abs_tol: 0.0,
    max_subdivisions: 200,
};

const CDF_CFG: QuadratureConfig = QuadratureConfig {
    rel_tol: 1e-10,
    abs_tol: 1e-13,
    max_subdivisions: 400,
};

pub(crate) fn snap_alpha(alpha: f64) -> f64 {
    if (alpha - 1.0).abs() < ALPHA_ONE_SNAP {
        1.0
    } else {
        alpha
    }
}

/// Standardized S0 density for fixed `(α, β)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StableKernel {
    alpha: f64,
    beta: f64,
    zeta: f64,
    theta0: f64,
}

impl StableKernel {
    pub(crate) fn new(alpha: f64, beta: f64) -> Self {
        let alpha = snap_alpha(alpha);
        let (zeta, theta0) = if alpha == 1.0 {
            (0.0, FRAC_PI_2)
        } else {
            let t = beta * (FRAC_PI_2 * alpha).tan();
            (-t, t.atan() / alpha)
        };
        Self {
            alpha,
            beta,
            zeta,
            theta0,
        }
    }

    fn mirrored(&self) -> Self {
        StableKernel::new(self.alpha, -self.beta)
    }

    /// Natural log of the standardized density.
    pub(crate) fn ln_pdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        if self.alpha == 1.0 {
            if self.beta == 0.0 {
                return -(PI * (1.0 + x * x)).ln();
            }
            if self.beta < 0.0 {
                return self.mirrored().ln_pdf(-x);
            }
            return self.ln_pdf_alpha_one(x);
        }
        let xm = x - self.zeta;
        if xm.abs() <= 1e-10 * (1.0 + self.zeta.abs()) {
            return self.ln_pdf_at_zeta();
        }
        if xm < 0.0 {
            return self.mirrored().ln_pdf(-x);
        }
        if self.alpha < 2.0 && xm.powf(self.alpha) > TAIL_SWITCH && self.beta > -1.0 {
            return self.ln_tail_asymptote(xm);
        }
        self.ln_pdf_zolotarev(xm)
    }

    pub(crate) fn pdf(&self, x: f64) -> f64 {
        let lp = self.ln_pdf(x);
        if lp == f64::NEG_INFINITY {
            0.0
        } else {
            lp.exp()
        }
    }

    fn ln_pdf_at_zeta(&self) -> f64 {
        let a = self.alpha;
        ln_gamma_unchecked(1.0 + 1.0 / a) + self.theta0.cos().ln()
            - PI.ln()
            - (0.5 / a) * (1.0 + self.zeta * self.zeta).ln()
    }

    /// `f(x) ~ α (1+β) sin(πα/2) Γ(α)/π · (x-ζ)^{-1-α}`
    fn ln_tail_asymptote(&self, xm: f64) -> f64 {
        let a = self.alpha;
        a.ln() + (1.0 + self.beta).ln() + (FRAC_PI_2 * a).sin().ln() + ln_gamma_unchecked(a)
            - PI.ln()
            - (1.0 + a) * xm.ln()
    }

    fn ln_pdf_zolotarev(&self, xm: f64) -> f64 {
        let a = self.alpha;
        let th0 = self.theta0;
        let a1 = a / (a - 1.0);
        let ln_c = a1 * xm.ln();
        let c0 = (a * th0).cos().ln() / (a - 1.0);
        let ln_g = |th: f64| -> f64 {
            let v = c0 + a1 * (th.cos().ln() - (a * (th0 + th)).sin().ln()) + (a * th0 + (a - 1.0) * th).cos().ln()
                - th.cos().ln();
            ln_c + v
        };
        let lo = -th0;
        let hi = FRAC_PI_2;
        if !(hi > lo) {
            return f64::NEG_INFINITY;
        }
        let integral = split_integral(&ln_g, lo, hi);
        if integral <= 0.0 || !integral.is_finite() {
            return f64::NEG_INFINITY;
        }
        a.ln() - (PI * (a - 1.0).abs() * xm).ln() + integral.ln()
    }

    fn ln_pdf_alpha_one(&self, x: f64) -> f64 {
        let b = self.beta;
        if x > 1e12 {
            // α = 1 tail: (1+β)/(π x²)
            return (1.0 + b).ln() - PI.ln() - 2.0 * x.ln();
        }
        let shift = -PI * x / (2.0 * b);
        let ln2pi = (2.0 / PI).ln();
        let ln_g = |th: f64| -> f64 {
            let w = FRAC_PI_2 + b * th;
            shift + ln2pi + w.ln() - th.cos().ln() + w * th.tan() / b
        };
        let integral = split_integral(&ln_g, -FRAC_PI_2, FRAC_PI_2);
        if integral <= 0.0 || !integral.is_finite() {
            return f64::NEG_INFINITY;
        }
        integral.ln() - (2.0 * b).ln()
    }

    /// Standardized distribution function by quadrature of the density.
    pub(crate) fn cdf(&self, x: f64) -> Result<f64> {
        if x == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        if x == f64::INFINITY {
            return Ok(1.0);
        }
        let f = |t: f64| self.pdf(t);
        let v = if x <= 0.0 {
            lower_tail(f, x, &CDF_CFG).into_result("stable cdf")?
        } else {
            1.0 - upper_tail(f, x, &CDF_CFG).into_result("stable cdf")?
        };
        Ok(v.clamp(0.0, 1.0))
    }
}

/// `∫ exp(ln g - g) dθ` over `[lo, hi]`, with `ln g` monotone, split at `g = 1`.
///
/// Each half is truncated where the integrand drops below `e^-45` of its
/// peak so that quadrature nodes land on the (possibly very narrow) bump.
fn split_integral<F: Fn(f64) -> f64>(ln_g: &F, lo: f64, hi: f64) -> f64 {
    let integrand = |th: f64| {
        let lg = ln_g(th);
        if lg.is_nan() {
            return 0.0;
        }
        let v = (lg - lg.exp()).exp();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let width = hi - lo;
    let lo_in = lo + 1e-15 * width;
    let hi_in = hi - 1e-15 * width;
    let k_lo = ln_g(lo_in);
    let k_hi = ln_g(hi_in);
    let crosses = !k_lo.is_nan() && !k_hi.is_nan() && (k_lo < 0.0) != (k_hi < 0.0);
    if !crosses {
        return gauss_kronrod(integrand, lo, hi, &INTEGRAND_CFG).value;
    }
    let increasing = k_hi > k_lo;
    let (mut l, mut h) = (lo_in, hi_in);
    for _ in 0..200 {
        let m = 0.5 * (l + h);
        if m <= l || m >= h {
            break;
        }
        let v = ln_g(m);
        if v.is_nan() {
            break;
        }
        if (v < 0.0) == increasing {
            l = m;
        } else {
            h = m;
        }
    }
    let split = 0.5 * (l + h);
    // where ln g reaches `target` between the endpoint probe and the split
    let cut = |end: f64, k_end: f64| -> f64 {
        let target = if k_end > 0.0 { 50f64.ln() } else { -45.0 };
        let beyond = |k: f64| if target > 0.0 { k > target } else { k < target };
        if !beyond(k_end) {
            return end;
        }
        let (mut far, mut near) = (end, split);
        for _ in 0..200 {
            let m = 0.5 * (far + near);
            if m == far || m == near {
                break;
            }
            let k = ln_g(m);
            if k.is_nan() || beyond(k) {
                far = m;
            } else {
                near = m;
            }
        }
        far
    };
    let a = if k_lo.is_finite() || k_lo == f64::INFINITY || k_lo == f64::NEG_INFINITY {
        cut(lo_in, k_lo)
    } else {
        lo
    };
    let b = cut(hi_in, k_hi);
    let a = if a == lo_in && !(k_lo.abs() > 50.0) { lo } else { a };
    let b = if b == hi_in && !(k_hi.abs() > 50.0) { hi } else { b };
    gauss_kronrod(integrand, a, split, &INTEGRAND_CFG).value + gauss_kronrod(integrand, split, b, &INTEGRAND_CFG).value
}

pub(crate) fn ln_pdf(alpha: f64, beta: f64, gamma: f64, delta: f64, x: f64) -> f64 {
    StableKernel::new(alpha, beta).ln_pdf((x - delta) / gamma) - gamma.ln()
}

pub(crate) fn cdf(alpha: f64, beta: f64, gamma: f64, delta: f64, x: f64) -> Result<f64> {
    StableKernel::new(alpha, beta).cdf((x - delta) / gamma)
}
