//! Probability densities used for fitting variance and difference series.
//!
//! Positive-support families: `GB2(p, q, α, β)`, `BP(p, q, β)`,
//! `GIGa(α, β, γ)`, `IGa(α, β)`, `GGa(α, β, γ)`, `Ga(α, β)`; `β` is always
//! the scale. Real-line families: the stable law `S(α, β, γ, δ)` (Nolan's S0
//! parameterization), `N(μ, σ)`, `GST(μ, σ, ν)` and the Tricomi-U normal
//! variance mixture `GCHU(p, q, σ, μ)`.

pub(crate) mod closed;
mod fast;
mod gchu;
mod sample;
mod spline;
pub(crate) mod stable;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::QuadratureConfig;

pub use fast::{cdf_sorted, LogDensity};

/// Largest value returned by [`plot_curve`]; densities that diverge at the
/// edge of the support are clipped to it for display only.
pub const PLOT_DENSITY_CAP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    S,
    GB2,
    BP,
    GIGa,
    IGa,
    GGa,
    Ga,
    N,
    GST,
    GCHU,
}

impl Family {
    /// The seven families fitted to variance series.
    pub const VARIANCE: [Family; 7] = [
        Family::S,
        Family::GB2,
        Family::BP,
        Family::GIGa,
        Family::IGa,
        Family::GGa,
        Family::Ga,
    ];

    /// The four families fitted to difference series.
    pub const DIFFERENCE: [Family; 4] = [Family::N, Family::GST, Family::GCHU, Family::S];

    pub const ALL: [Family; 10] = [
        Family::S,
        Family::GB2,
        Family::BP,
        Family::GIGa,
        Family::IGa,
        Family::GGa,
        Family::Ga,
        Family::N,
        Family::GST,
        Family::GCHU,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::S => "S",
            Family::GB2 => "GB2",
            Family::BP => "BP",
            Family::GIGa => "GIGa",
            Family::IGa => "IGa",
            Family::GGa => "GGa",
            Family::Ga => "Ga",
            Family::N => "N",
            Family::GST => "GST",
            Family::GCHU => "GCHU",
        }
    }

    /// Long name used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Family::S => "Stable",
            Family::N => "Normal",
            Family::GST => "Gen-Student's t",
            Family::GCHU => "Tricomi",
            other => other.name(),
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            Family::S | Family::GB2 | Family::GCHU => 4,
            Family::BP | Family::GIGa | Family::GGa | Family::GST => 3,
            Family::IGa | Family::Ga | Family::N => 2,
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::S => &["alpha", "beta", "gamma", "delta"],
            Family::GB2 => &["p", "q", "alpha", "beta"],
            Family::BP => &["p", "q", "beta"],
            Family::GIGa | Family::GGa => &["alpha", "beta", "gamma"],
            Family::IGa | Family::Ga => &["alpha", "beta"],
            Family::N => &["mu", "sigma"],
            Family::GST => &["mu", "sigma", "nu"],
            Family::GCHU => &["p", "q", "sigma", "mu"],
        }
    }

    /// True for the families supported on the positive half-line.
    pub fn positive_support(self) -> bool {
        !matches!(self, Family::S | Family::N | Family::GST | Family::GCHU)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Domain(format!("unknown distribution family '{s}'")))
    }
}

/// A family tag plus its ordered parameter vector.
///
/// Serializes as `{"family": "GB2", "params": [p, q, alpha, beta]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct DistributionSpec {
    family: Family,
    params: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSpec {
    family: Family,
    params: Vec<f64>,
}

impl TryFrom<RawSpec> for DistributionSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        DistributionSpec::new(raw.family, raw.params)
    }
}

fn positive(family: Family, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{family}: {name} must be positive and finite, got {v}"
        )))
    }
}

fn finite(family: Family, name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{family}: {name} must be finite, got {v}")))
    }
}

impl DistributionSpec {
    pub fn new(family: Family, params: Vec<f64>) -> Result<Self> {
        if params.len() != family.param_count() {
            return Err(Error::Domain(format!(
                "{family} takes {} parameters ({}), got {}",
                family.param_count(),
                family.param_names().join(", "),
                params.len()
            )));
        }
        let names = family.param_names();
        match family {
            Family::S => {
                let (alpha, beta) = (params[0], params[1]);
                if !(alpha > 0.0 && alpha <= 2.0) {
                    return Err(Error::Domain(format!("S: alpha must lie in (0, 2], got {alpha}")));
                }
                if !(-1.0..=1.0).contains(&beta) {
                    return Err(Error::Domain(format!("S: beta must lie in [-1, 1], got {beta}")));
                }
                positive(family, "gamma", params[2])?;
                finite(family, "delta", params[3])?;
            }
            Family::N | Family::GST => {
                finite(family, "mu", params[0])?;
                for (n, v) in names.iter().zip(&params).skip(1) {
                    positive(family, n, *v)?;
                }
            }
            Family::GCHU => {
                for (n, v) in names.iter().zip(&params).take(3) {
                    positive(family, n, *v)?;
                }
                finite(family, "mu", params[3])?;
            }
            _ => {
                for (n, v) in names.iter().zip(&params) {
                    positive(family, n, *v)?;
                }
            }
        }
        Ok(Self { family, params })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Natural logarithm of the density; `-∞` outside the support.
    pub fn log_pdf(&self, x: f64) -> f64 {
        let p = &self.params;
        match self.family {
            Family::S => stable::ln_pdf(p[0], p[1], p[2], p[3], x),
            Family::GCHU => gchu::ln_pdf(p[0], p[1], p[2], p[3], x, &QuadratureConfig::default()),
            _ => closed::ln_pdf(self.family, p, x),
        }
    }

    /// Density at `x`; zero outside the support.
    pub fn pdf(&self, x: f64) -> f64 {
        let lp = self.log_pdf(x);
        if lp == f64::NEG_INFINITY {
            0.0
        } else {
            lp.exp()
        }
    }

    /// Cumulative distribution function.
    ///
    /// The stable and Tricomi families integrate the density numerically;
    /// the rest use incomplete gamma/beta closed forms.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let p = &self.params;
        match self.family {
            Family::S => stable::cdf(p[0], p[1], p[2], p[3], x),
            Family::GCHU => gchu::cdf(p[0], p[1], p[2], p[3], x),
            _ => closed::cdf(self.family, p, x),
        }
    }

    /// `count` deterministic draws from the distribution.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut rng = crate::rng::seeded(seed);
        sample::draw(self, count, &mut rng)
    }

    /// Draws from the distribution using an existing generator.
    pub fn sample_with(&self, count: usize, rng: &mut crate::rng::Rng) -> Vec<f64> {
        sample::draw(self, count, rng)
    }

    /// Power-law exponents of the density at the origin and at infinity.
    pub fn exponents(&self) -> Result<ExponentReport> {
        let p = &self.params;
        let (front, tail) = match self.family {
            Family::S => (None, Some(-(p[0] + 1.0))),
            Family::GB2 => (Some(p[2] * p[0] - 1.0), Some(-(p[2] * p[1] + 1.0))),
            Family::BP => (Some(p[0] - 1.0), Some(-(p[1] + 1.0))),
            Family::GIGa => (None, Some(-(p[0] * p[2] + 1.0))),
            Family::IGa => (None, Some(-(p[0] + 1.0))),
            Family::GGa => (Some(p[0] * p[2] - 1.0), None),
            Family::Ga => (Some(p[0] - 1.0), None),
            Family::N | Family::GST | Family::GCHU => {
                return Err(Error::Unsupported(format!(
                    "{} has no front/tail exponent entry",
                    self.family
                )))
            }
        };
        Ok(ExponentReport {
            front_exponent: front,
            tail_exponent: tail,
        })
    }

    /// Law of `Y = X^r`.
    ///
    /// `GB2(p, q, α, β) -> GB2(p, q, α/r, β^r)` and
    /// `GIGa(α, β, γ) -> GIGa(α, β^r, γ/r)`.
    pub fn power_transform(&self, r: f64) -> Result<DistributionSpec> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("power transform requires r > 0, got {r}")));
        }
        let p = &self.params;
        match self.family {
            Family::GB2 => DistributionSpec::new(Family::GB2, vec![p[0], p[1], p[2] / r, pow_exact(p[3], r)]),
            Family::GIGa => DistributionSpec::new(Family::GIGa, vec![p[0], pow_exact(p[1], r), p[2] / r]),
            other => Err(Error::Unsupported(format!(
                "power transform is defined for GB2 and GIGa, not {other}"
            ))),
        }
    }

    /// Fast log-density evaluator for many points within `[lo, hi]`.
    pub fn log_density_on(&self, lo: f64, hi: f64) -> Result<LogDensity> {
        LogDensity::new(self, lo, hi)
    }
}

/// `b^r` with exact squaring and square roots, so that `r = 2` followed by
/// `r = 0.5` reproduces the input bit for bit.
fn pow_exact(b: f64, r: f64) -> f64 {
    if r == 1.0 {
        b
    } else if r == 2.0 {
        b * b
    } else if r == 0.5 {
        b.sqrt()
    } else {
        b.powf(r)
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params.iter().map(|v| format!("{v:.4}")).collect();
        write!(f, "{}({})", self.family, ps.join(", "))
    }
}

/// Front (`x -> 0`) and tail (`x -> ∞`) power-law exponents of a density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub front_exponent: Option<f64>,
    pub tail_exponent: Option<f64>,
}

/// Density sampled on `points` equally spaced abscissae of `[lo, hi]`,
/// clipped at [`PLOT_DENSITY_CAP`]. Intended for plot data only.
pub fn plot_curve(spec: &DistributionSpec, lo: f64, hi: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 || !(hi > lo) {
        return Err(Error::Domain(format!("bad plot grid [{lo}, {hi}] x {points}")));
    }
    let dens = spec.log_density_on(lo, hi)?;
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let x = lo + step * i as f64;
            let y = dens.ln_pdf(x).exp();
            (
                x,
                if y.is_finite() {
                    y.min(PLOT_DENSITY_CAP)
                } else {
                    PLOT_DENSITY_CAP
                },
            )
        })
        .collect())
}
