use crate::error::{domain, Result};
use crate::specfun::incomplete::inc_gamma_pq;

// Lanczos approximation, g = 671/128, 14 terms.
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_88e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("ln_gamma requires a finite positive argument, got {x}"));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_1;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// `ln B(p, q)`.
pub fn ln_beta(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0) || !(q > 0.0) {
        return domain(format!("beta function requires p, q > 0, got ({p}, {q})"));
    }
    Ok(ln_beta_unchecked(p, q))
}

pub(crate) fn ln_beta_unchecked(p: f64, q: f64) -> f64 {
    // order the arguments so that B(p, q) and B(q, p) share one code path
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    ln_gamma_unchecked(lo) + ln_gamma_unchecked(hi) - ln_gamma_unchecked(lo + hi)
}

/// `B(p, q) = Γ(p)Γ(q)/Γ(p+q)`.
pub fn beta_fn(p: f64, q: f64) -> Result<f64> {
    ln_beta(p, q).map(f64::exp)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 0.0 {
        inc_gamma_pq(0.5, x * x).1
    } else {
        2.0 - inc_gamma_pq(0.5, x * x).1
    }
}
