//! Tabulated log-densities for likelihood and KS loops.
//!
//! The stable and Tricomi densities cost a quadrature per point. For a fixed
//! parameter vector they are tabulated once on a smooth coordinate and
//! spline-interpolated; points outside the table fall back to the exact
//! evaluation.

use super::spline::UniformSpline;
use super::stable::StableKernel;
use super::{closed, gchu, DistributionSpec, Family};
use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod, QuadratureConfig};
use crate::specfun::ln_tricomi_u;

const STABLE_STEP: f64 = 0.05;
const LN_FLOOR: f64 = -800.0;
const GCHU_STEP: f64 = 0.1;
const GCHU_LN_Z_MIN: f64 = -30.0;
const GRID_PAD: i64 = 6;

/// First node index and node count of a padded grid on multiples of `h`
/// covering `[a, b]`.
fn grid(a: f64, b: f64, h: f64) -> (i64, usize) {
    let i_lo = (a / h).floor() as i64 - GRID_PAD;
    let i_hi = (b / h).ceil() as i64 + GRID_PAD;
    (i_lo, (i_hi - i_lo + 1) as usize)
}

/// `ln U(a, b, e^s)` at `s = (i_lo + i) h` for `i < n`.
///
/// With `t = e^u` the integral representation reads
/// `Γ(a) U = ∫ exp(a u + (b-a-1) ln(1+e^u) - e^(s+u)) du`. A trapezoid rule
/// with the table's own step puts `s + u` on multiples of `h`, so a single
/// vector of `exp(-e^(m h))` serves every node and each node is a dot
/// product. The integrand is analytic in the strip `|Im u| < π/2`, so the
/// rule's error is of order `exp(-π²/h)`. Nodes whose sum is not safely
/// representable are computed by quadrature instead.
fn ln_tricomi_nodes(a: f64, b: f64, i_lo: i64, n: usize, h: f64) -> Result<Vec<f64>> {
    let c = b - a - 1.0;
    let i_hi = i_lo + n as i64 - 1;
    let (s_min, s_max) = (i_lo as f64 * h, i_hi as f64 * h);
    // left: e^(a u) below the peak of the largest z; right: past z e^u = K
    // for the smallest z, beyond the peak of e^((b-1) u - z e^u)
    let u_lo = (a.ln() - s_max).min(0.0) - 40.0 / a - 1.0;
    let u_hi = (60.0 + 2.0 * a.max(b - 1.0)).ln() - s_min + 1.0;
    let j_lo = (u_lo / h).floor() as i64;
    let j_hi = (u_hi / h).ceil() as i64;
    let ln_weight: Vec<f64> = (j_lo..=j_hi)
        .map(|j| {
            let u = j as f64 * h;
            a * u + c * u.exp().ln_1p()
        })
        .collect();
    let shift = ln_weight.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weight: Vec<f64> = ln_weight.iter().map(|v| (v - shift).exp()).collect();
    // decay[m - m_lo] = exp(-e^(m h)); zero once e^(m h) > 745
    let m_lo = i_lo + j_lo;
    let m_cut = (745f64.ln() / h).ceil() as i64;
    let decay: Vec<f64> = (m_lo..=m_cut.max(m_lo))
        .map(|m| (-(m as f64 * h).exp()).exp())
        .collect();
    let base = shift + h.ln() - crate::specfun::gamma::ln_gamma_unchecked(a);
    let cfg = QuadratureConfig::default();
    let mut out = Vec::with_capacity(n);
    for i in i_lo..=i_hi {
        // terms with i + j > m_cut vanish
        let j_end = (m_cut - i).min(j_hi);
        let mut sum = 0.0;
        for j in j_lo..=j_end {
            sum += weight[(j - j_lo) as usize] * decay[(i + j - m_lo) as usize];
        }
        if sum > 1e-280 && sum.is_finite() {
            out.push(base + sum.ln());
        } else {
            out.push(ln_tricomi_u(a, b, (i as f64 * h).exp(), &cfg)?);
        }
    }
    Ok(out)
}

/// Log-density of a fixed distribution, cheap to evaluate repeatedly.
#[derive(Debug, Clone)]
pub struct LogDensity {
    spec: DistributionSpec,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Closed,
    Stable {
        kernel: StableKernel,
        ln_scale: f64,
        table: UniformSpline,
    },
    Tricomi {
        norm: f64,
        table: UniformSpline,
    },
}

impl LogDensity {
    /// Builds the evaluator; the table covers `[lo, hi]`.
    pub fn new(spec: &DistributionSpec, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(Error::Domain(format!("bad tabulation range [{lo}, {hi}]")));
        }
        let p = spec.params();
        let kind = match spec.family() {
            Family::S => {
                let kernel = StableKernel::new(p[0], p[1]);
                let (gamma, delta) = (p[2], p[3]);
                // nodes sit on multiples of the step so the interpolant does
                // not move when the range does
                let (i_lo, n) = grid(
                    ((lo - delta) / gamma).asinh(),
                    ((hi - delta) / gamma).asinh(),
                    STABLE_STEP,
                );
                let s_lo = i_lo as f64 * STABLE_STEP;
                let y = (0..n)
                    .map(|i| {
                        let v = kernel.ln_pdf((s_lo + STABLE_STEP * i as f64).sinh());
                        if v.is_finite() {
                            v.max(LN_FLOOR)
                        } else {
                            LN_FLOOR
                        }
                    })
                    .collect();
                let h = STABLE_STEP;
                Kind::Stable {
                    kernel,
                    ln_scale: gamma.ln(),
                    table: UniformSpline::new(s_lo, h, y),
                }
            }
            Family::GCHU => {
                let (pp, q, sigma, mu) = (p[0], p[1], p[2], p[3]);
                let far = (lo - mu).abs().max((hi - mu).abs()) / sigma;
                let z_max = (0.5 * far * far).max(1.0);
                let (a, b) = (q + 0.5, 1.5 - pp);
                let (i_lo, n) = grid(GCHU_LN_Z_MIN, z_max.ln(), GCHU_STEP);
                let z_lo = i_lo as f64 * GCHU_STEP;
                let h = GCHU_STEP;
                let y = ln_tricomi_nodes(a, b, i_lo, n, h)?;
                Kind::Tricomi {
                    norm: gchu::ln_norm(pp, q, sigma),
                    table: UniformSpline::new(z_lo, h, y),
                }
            }
            _ => Kind::Closed,
        };
        Ok(Self {
            spec: spec.clone(),
            kind,
        })
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let p = self.spec.params();
        match &self.kind {
            Kind::Closed => closed::ln_pdf(self.spec.family(), p, x),
            Kind::Stable {
                kernel,
                ln_scale,
                table,
            } => {
                let u = (x - p[3]) / p[2];
                let s = u.asinh();
                if s >= table.lo() && s <= table.hi() {
                    table.eval(s) - ln_scale
                } else {
                    kernel.ln_pdf(u) - ln_scale
                }
            }
            Kind::Tricomi { norm, table } => {
                let (pp, q, sigma, mu) = (p[0], p[1], p[2], p[3]);
                let t = (x - mu) / sigma;
                let z = 0.5 * t * t;
                let lz = z.ln();
                if lz >= table.lo() && lz <= table.hi() {
                    norm + table.eval(lz)
                } else {
                    gchu::ln_pdf(pp, q, sigma, mu, x, &QuadratureConfig::default())
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let v = self.ln_pdf(x);
        if v == f64::NEG_INFINITY {
            0.0
        } else {
            v.exp()
        }
    }
}

const SEGMENT_CFG: QuadratureConfig = QuadratureConfig {
    rel_tol: 1e-9,
    abs_tol: 1e-14,
    max_subdivisions: 100,
};

/// Distribution function at every point of an ascending slice.
///
/// Closed families use their exact CDF. The stable and Tricomi families
/// integrate the tabulated density between consecutive points, starting
/// from the location parameter where the CDF is known.
pub fn cdf_sorted(spec: &DistributionSpec, sorted: &[f64]) -> Result<Vec<f64>> {
    if sorted.is_empty() {
        return Ok(Vec::new());
    }
    if sorted.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Domain("cdf_sorted needs ascending, NaN-free input".into()));
    }
    let p = spec.params();
    let (anchor, f_anchor) = match spec.family() {
        Family::S => (p[3], StableKernel::new(p[0], p[1]).cdf(0.0)?),
        Family::GCHU => (p[3], 0.5),
        _ => return sorted.iter().map(|&x| spec.cdf(x)).collect(),
    };
    let lo = sorted[0].min(anchor);
    let hi = sorted[sorted.len() - 1].max(anchor);
    let dens = LogDensity::new(spec, lo, hi)?;
    let f = |x: f64| {
        let v = dens.pdf(x);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let mut out = vec![0.0; sorted.len()];
    let split = sorted.partition_point(|&x| x < anchor);
    let mut acc = f_anchor;
    let mut prev = anchor;
    for i in split..sorted.len() {
        let x = sorted[i];
        if x > prev {
            acc += gauss_kronrod(&f, prev, x, &SEGMENT_CFG).value;
            prev = x;
        }
        out[i] = acc.clamp(0.0, 1.0);
    }
    let mut acc = f_anchor;
    let mut prev = anchor;
    for i in (0..split).rev() {
        let x = sorted[i];
        if x < prev {
            acc -= gauss_kronrod(&f, x, prev, &SEGMENT_CFG).value;
            prev = x;
        }
        out[i] = acc.clamp(0.0, 1.0);
    }
    Ok(out)
}
