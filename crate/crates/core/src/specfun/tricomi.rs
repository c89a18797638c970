use crate::error::{domain, Result};
use crate::quad::QuadratureConfig;
use crate::specfun::gamma::ln_gamma_unchecked;

/// Terms this many e-folds below the peak are dropped.
const DROP: f64 = 45.0;
const MAX_STEP: f64 = 0.1;

/// `ln U(a, b, z)` for `a > 0`, `z >= 0`.
///
/// With `t = e^u` the integral representation
/// `U(a, b, z) = Γ(a)^{-1} ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`
/// becomes `Γ(a)^{-1} ∫ exp(F(u)) du` with
/// `F(u) = a u + (b-a-1) ln(1+e^u) - z e^u`, which is analytic in the strip
/// `|Im u| < π/2` and decays exponentially to the left and doubly
/// exponentially to the right. The trapezoid rule on such an integrand
/// converges geometrically in the inverse step, so it is summed outward
/// from the peak of `F` in log space.
///
/// At `z = 0` only `b < 1` is finite, with `U(a, b, 0) = Γ(1-b)/Γ(a+1-b)`.
/// `cfg` is validated but the rule's step is fixed by the peak width.
pub fn ln_tricomi_u(a: f64, b: f64, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return domain(format!("tricomi U requires a > 0, got {a}"));
    }
    if !b.is_finite() {
        return domain(format!("tricomi U requires finite b, got {b}"));
    }
    if z == 0.0 {
        if b < 1.0 {
            return Ok(ln_gamma_unchecked(1.0 - b) - ln_gamma_unchecked(a + 1.0 - b));
        }
        return domain(format!("U({a}, {b}, 0) diverges for b >= 1"));
    }
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("tricomi U requires finite z > 0, got {z}"));
    }
    cfg.validate()?;
    let c = b - a - 1.0;
    let logistic = |u: f64| 1.0 / (1.0 + (-u).exp());
    let f = |u: f64| a * u + c * softplus(u) - z * u.exp();
    let df = |u: f64| a + c * logistic(u) - z * u.exp();

    // F' is a > 0 far left and -∞ far right; bracket and bisect its root
    let mut hi = (a.max(1.0) / z).ln().max(0.0) + 1.0;
    while df(hi) > 0.0 {
        hi += 2.0 * hi.abs().max(1.0);
    }
    let mut lo = hi - 1.0;
    while df(lo) <= 0.0 {
        lo -= 2.0 * (hi - lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if df(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * (1.0 + mid.abs()) {
            break;
        }
    }
    let peak = 0.5 * (lo + hi);
    let top = f(peak);
    let curvature = c * logistic(peak) * logistic(-peak) - z * peak.exp();
    let step = if curvature < 0.0 {
        MAX_STEP.min(0.5 / (-curvature).sqrt())
    } else {
        MAX_STEP
    };

    let mut sum = 1.0;
    for dir in [1.0, -1.0] {
        let mut k = 1.0;
        loop {
            let u = peak + dir * k * step;
            let v = f(u) - top;
            sum += v.exp();
            // stop once negligible and still falling away from the peak
            if v < -DROP && dir * df(u) < 0.0 {
                break;
            }
            k += 1.0;
        }
    }
    Ok(top + (step * sum).ln() - ln_gamma_unchecked(a))
}

/// `ln(1 + e^u)` without overflow.
fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// Tricomi confluent hypergeometric function `U(a, b, z)`.
pub fn tricomi_u(a: f64, b: f64, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    ln_tricomi_u(a, b, z, cfg).map(f64::exp)
}
