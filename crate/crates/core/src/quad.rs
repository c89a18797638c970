//! Numerical integration.
//!
//! Two engines are provided:
//!
//! * globally adaptive 7/15-point Gauss–Kronrod on finite intervals, with the
//!   usual `t -> a + (1 - t)/t` map for half-infinite ranges;
//! * exp-sinh double-exponential quadrature on `[0, ∞)`, which copes with
//!   algebraic endpoint singularities at 0 and algebraic decay at infinity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances for every quadrature in the crate.
///
/// For the Gauss–Kronrod engine `max_subdivisions` bounds the number of
/// interval bisections; for the double-exponential engine it bounds the
/// number of step-halving levels through `ceil(log2(max_subdivisions)) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_subdivisions < 1 {
            return Err(Error::Domain(format!(
                "invalid quadrature config: rel_tol={}, abs_tol={}, max_subdivisions={}",
                self.rel_tol, self.abs_tol, self.max_subdivisions
            )));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    /// Turns a non-converged estimate into a numerical error carrying the diagnostics.
    pub fn into_result(self, what: &str) -> Result<f64> {
        if self.converged && self.value.is_finite() {
            Ok(self.value)
        } else {
            Err(Error::Numerical(format!(
                "{what}: quadrature did not converge (estimate {:e}, error {:e}, {} evaluations)",
                self.value, self.abs_error, self.evaluations
            )))
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn sanitize(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// One 15-point Kronrod panel with the QUADPACK error estimate.
fn qk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let dhlgth = hlgth.abs();

    let fc = sanitize(f(centr));
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let absc = hlgth * XGK[j];
        let f1 = sanitize(f(centr - absc));
        let f2 = sanitize(f(centr + absc));
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    let mut abserr = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && abserr != 0.0 {
        abserr = resasc * (200.0 * abserr / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        abserr = abserr.max(50.0 * f64::EPSILON * resabs);
    }
    (result, abserr)
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let (v0, e0) = qk15(&mut f, a, b);
    let mut evaluations = 15;
    // (error, lo, hi, value)
    let mut panels: Vec<(f64, f64, f64, f64)> = vec![(e0, a, b, v0)];
    let mut total = v0;
    let mut err = e0;
    let mut subdivisions = 0;
    while err > cfg.target(total) && subdivisions < cfg.max_subdivisions {
        let (idx, _) = panels.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, p)| {
                if p.0 > acc.1 {
                    (i, p.0)
                } else {
                    acc
                }
            },
        );
        let (pe, lo, hi, pv) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            // interval exhausted at machine resolution
            panels.push((pe, lo, hi, pv));
            break;
        }
        let (v1, e1) = qk15(&mut f, lo, mid);
        let (v2, e2) = qk15(&mut f, mid, hi);
        evaluations += 30;
        subdivisions += 1;
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        panels.push((e1, lo, mid, v1));
        panels.push((e2, mid, hi, v2));
        if subdivisions % 32 == 0 {
            // refresh the running sums to shed accumulated rounding
            total = panels.iter().map(|p| p.3).sum();
            err = panels.iter().map(|p| p.0).sum();
        }
    }
    total = panels.iter().map(|p| p.3).sum();
    err = panels.iter().map(|p| p.0).sum();
    QuadResult {
        value: total,
        abs_error: err,
        evaluations,
        converged: err <= cfg.target(total),
    }
}

/// Integrates `f` over `[a, ∞)`.
pub fn upper_tail<F: FnMut(f64) -> f64>(mut f: F, a: f64, cfg: &QuadratureConfig) -> QuadResult {
    gauss_kronrod(
        |t: f64| {
            let x = a + (1.0 - t) / t;
            f(x) / (t * t)
        },
        0.0,
        1.0,
        cfg,
    )
}

/// Integrates `f` over `(-∞, b]`.
pub fn lower_tail<F: FnMut(f64) -> f64>(mut f: F, b: f64, cfg: &QuadratureConfig) -> QuadResult {
    gauss_kronrod(
        |t: f64| {
            let x = b - (1.0 - t) / t;
            f(x) / (t * t)
        },
        0.0,
        1.0,
        cfg,
    )
}

/// Integrates `f` over the whole real line, splitting at `split`.
pub fn whole_line<F: FnMut(f64) -> f64>(mut f: F, split: f64, cfg: &QuadratureConfig) -> QuadResult {
    let lo = lower_tail(&mut f, split, cfg);
    let hi = upper_tail(&mut f, split, cfg);
    QuadResult {
        value: lo.value + hi.value,
        abs_error: lo.abs_error + hi.abs_error,
        evaluations: lo.evaluations + hi.evaluations,
        converged: lo.converged && hi.converged,
    }
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;
/// |s| beyond which exp(π/2 sinh s) leaves the normal f64 range.
const DE_S_MAX: f64 = 6.7;

/// Exp-sinh double-exponential quadrature of `f` over `[0, ∞)`.
pub fn exp_sinh<F: FnMut(f64) -> f64>(mut f: F, cfg: &QuadratureConfig) -> QuadResult {
    let max_levels = (cfg.max_subdivisions as f64).log2().ceil() as usize + 1;
    let mut eval = |s: f64| -> f64 {
        let t = (HALF_PI * s.sinh()).exp();
        if t == 0.0 || !t.is_finite() {
            return 0.0;
        }
        let w = t * HALF_PI * s.cosh();
        let v = f(t) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let mut evaluations = 0usize;

    // level 0: step 1/2 over the full range
    let mut h = 0.5;
    let mut sum = eval(0.0);
    evaluations += 1;
    for dir in [1.0, -1.0] {
        let mut k = 1;
        let mut small = 0;
        loop {
            let s = dir * k as f64 * h;
            if s.abs() > DE_S_MAX {
                break;
            }
            let term = eval(s);
            evaluations += 1;
            sum += term;
            if term.abs() <= f64::EPSILON * sum.abs() {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            k += 1;
        }
    }
    let mut estimate = sum * h;
    let mut err = f64::INFINITY;

    for _ in 1..max_levels {
        h *= 0.5;
        let mut add = 0.0;
        for dir in [1.0, -1.0] {
            let mut k = 1usize;
            let mut small = 0;
            loop {
                let s = dir * (2 * k - 1) as f64 * h;
                if s.abs() > DE_S_MAX {
                    break;
                }
                let term = eval(s);
                evaluations += 1;
                add += term;
                if term.abs() <= f64::EPSILON * (sum + add).abs() {
                    small += 1;
                    if small >= 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
                k += 1;
            }
        }
        sum += add;
        let next = sum * h;
        err = (next - estimate).abs();
        estimate = next;
        if err <= cfg.target(estimate) {
            break;
        }
    }
    QuadResult {
        value: estimate,
        abs_error: err,
        evaluations,
        converged: err <= cfg.target(estimate),
    }
}
