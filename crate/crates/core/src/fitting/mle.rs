//! Maximum-likelihood fits.
//!
//! Data are standardized first (divided by the median for positive
//! families, centred on the median and divided by a robust spread for
//! real-line families), the likelihood is maximized over unconstrained
//! coordinates with a multi-start simplex, and the optimum is mapped back.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::ks::ks_sorted;
use super::likelihood::Sample;
use super::simplex::{minimize, SimplexOptions};
use super::FitResult;
use crate::distributions::{DistributionSpec, Family};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};

/// Minimum sample size accepted by [`mle_fit`].
pub const MIN_SAMPLES: usize = 50;

const START_STEP: f64 = 0.3;
const PERTURB_SD: f64 = 0.7;
const MAX_POLISH: usize = 3;
/// Free coordinates beyond this are treated as a degenerate limit of the family.
const FREE_BOUND: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MleOptions {
    /// Total number of simplex starts: the recipe start(s) plus perturbed ones.
    pub restarts: usize,
    /// Seed for the perturbed starts.
    pub seed: u64,
    pub max_evals: usize,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            seed: 0,
            max_evals: 2000,
        }
    }
}

/// Iteration counts of the optimizer run that produced a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizerSummary {
    pub iterations: usize,
    pub evaluations: usize,
    pub restarts: usize,
}

/// Fits `family` to `data` by maximum likelihood.
///
/// `init`, if given, is used as the first start instead of the moment-based
/// recipe. `restarts` counts all simplex starts.
pub fn mle_fit(data: &[f64], family: Family, init: Option<&[f64]>, restarts: usize) -> Result<FitResult> {
    let opts = MleOptions {
        restarts,
        ..MleOptions::default()
    };
    mle_fit_with(data, family, init, &opts)
}

pub fn mle_fit_with(data: &[f64], family: Family, init: Option<&[f64]>, opts: &MleOptions) -> Result<FitResult> {
    let std = Standardized::new(data, family)?;
    if let Some(p) = init {
        DistributionSpec::new(family, p.to_vec())?;
    }
    let init_std = init.map(|p| std.to_standard(family, p));
    let fit = fit_standardized(&std.values, family, init_std, opts)?;
    let params = std.to_original(family, &fit.params);
    let spec = DistributionSpec::new(family, params)?;
    let log_likelihood = -fit.value - std.values.len() as f64 * std.scale.ln();
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let ks = ks_sorted(&sorted, &spec)?;
    Ok(FitResult {
        exponents: spec.exponents().ok(),
        spec,
        log_likelihood,
        ks,
        sample_size: data.len(),
        converged: fit.converged,
        optimizer: OptimizerSummary {
            iterations: fit.iterations,
            evaluations: fit.evaluations,
            restarts: fit.starts,
        },
    })
}

struct Standardized {
    /// Sorted standardized values.
    values: Vec<f64>,
    center: f64,
    scale: f64,
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

impl Standardized {
    fn new(data: &[f64], family: Family) -> Result<Self> {
        if data.len() < MIN_SAMPLES {
            return Err(Error::Data(format!(
                "maximum likelihood needs at least {MIN_SAMPLES} samples, got {}",
                data.len()
            )));
        }
        if let Some(x) = data.iter().find(|x| !x.is_finite()) {
            return Err(Error::Data(format!("non-finite sample {x}")));
        }
        if family.positive_support() {
            if let Some(x) = data.iter().find(|x| **x <= 0.0) {
                return Err(Error::Data(format!("{family} needs positive samples, found {x}")));
            }
        }
        let mut sorted = data.to_vec();
        sorted.sort_by(f64::total_cmp);
        if sorted[0] == sorted[sorted.len() - 1] {
            return Err(Error::DegenerateData(format!(
                "all {} samples equal {}",
                sorted.len(),
                sorted[0]
            )));
        }
        let (center, scale) = if family.positive_support() {
            (0.0, quantile_sorted(&sorted, 0.5))
        } else {
            let med = quantile_sorted(&sorted, 0.5);
            let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
            let spread = if iqr > 0.0 {
                iqr / 1.349
            } else {
                let m = sorted.iter().sum::<f64>() / sorted.len() as f64;
                (sorted.iter().map(|x| (x - m).powi(2)).sum::<f64>() / sorted.len() as f64).sqrt()
            };
            (med, spread)
        };
        let values = sorted.iter().map(|x| (x - center) / scale).collect();
        Ok(Self { values, center, scale })
    }

    fn to_standard(&self, family: Family, p: &[f64]) -> Vec<f64> {
        map_location_scale(family, p, |v| v / self.scale, |v| (v - self.center) / self.scale)
    }

    fn to_original(&self, family: Family, p: &[f64]) -> Vec<f64> {
        map_location_scale(family, p, |v| v * self.scale, |v| self.center + v * self.scale)
    }
}

fn map_location_scale(family: Family, p: &[f64], scale: impl Fn(f64) -> f64, loc: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut out = p.to_vec();
    match family {
        Family::GB2 => out[3] = scale(p[3]),
        Family::BP => out[2] = scale(p[2]),
        Family::GIGa | Family::IGa | Family::GGa | Family::Ga => out[1] = scale(p[1]),
        Family::N | Family::GST => {
            out[0] = loc(p[0]);
            out[1] = scale(p[1]);
        }
        Family::GCHU => {
            out[2] = scale(p[2]);
            out[3] = loc(p[3]);
        }
        Family::S => {
            out[2] = scale(p[2]);
            out[3] = loc(p[3]);
        }
    }
    out
}

// Unconstrained coordinates: logs of positive parameters, locations as is,
// and for the stable law alpha = 0.1 + 0.95 (1 + sin v), beta = sin u.

fn to_free(family: Family, p: &[f64]) -> Vec<f64> {
    match family {
        Family::S => vec![
            ((p[0] - 0.1) / 0.95 - 1.0).clamp(-1.0, 1.0).asin(),
            p[1].clamp(-1.0, 1.0).asin(),
            p[2].ln(),
            p[3],
        ],
        Family::N => vec![p[0], p[1].ln()],
        Family::GST => vec![p[0], p[1].ln(), p[2].ln()],
        Family::GCHU => vec![p[0].ln(), p[1].ln(), p[2].ln(), p[3]],
        _ => p.iter().map(|v| v.ln()).collect(),
    }
}

fn from_free(family: Family, t: &[f64]) -> Vec<f64> {
    match family {
        Family::S => vec![(0.1 + 0.95 * (1.0 + t[0].sin())).min(2.0), t[1].sin(), t[2].exp(), t[3]],
        Family::N => vec![t[0], t[1].exp()],
        Family::GST => vec![t[0], t[1].exp(), t[2].exp()],
        Family::GCHU => vec![t[0].exp(), t[1].exp(), t[2].exp(), t[3]],
        _ => t.iter().map(|v| v.exp()).collect(),
    }
}

struct RawFit {
    params: Vec<f64>,
    value: f64,
    converged: bool,
    iterations: usize,
    evaluations: usize,
    starts: usize,
}

fn fit_standardized(xs: &[f64], family: Family, init: Option<Vec<f64>>, opts: &MleOptions) -> Result<RawFit> {
    let starts = match init {
        Some(p) => vec![p],
        None => recipe_starts(xs, family, opts)?,
    };
    let simplex = SimplexOptions {
        max_evals: opts.max_evals,
        ..SimplexOptions::default()
    };
    let sample = Sample::new(xs);
    let objective = |t: &[f64]| {
        if t.iter().any(|v| v.abs() > FREE_BOUND) {
            return f64::INFINITY;
        }
        sample.neg_log_likelihood(family, from_free(family, t))
    };
    let dim = family.param_count();
    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    let (mut iterations, mut evaluations) = (0, 0);
    let mut run = |t0: &[f64], step: f64, best: &mut Option<(Vec<f64>, f64, bool)>| {
        let r = minimize(objective, t0, &vec![step; dim], &simplex);
        iterations += r.iterations;
        evaluations += r.evaluations;
        let better = best.as_ref().is_none_or(|b| r.f < b.1);
        if better {
            *best = Some((r.x, r.f, r.converged));
        }
    };
    let total = opts.restarts.max(1);
    let mut used = 0;
    for p in starts.iter().take(total) {
        run(&to_free(family, p), START_STEP, &mut best);
        used += 1;
    }
    let mut rng = seeded(derive_seed(opts.seed, family as u64));
    while used < total {
        let centre = best
            .as_ref()
            .map(|b| b.0.clone())
            .unwrap_or_else(|| to_free(family, &starts[0]));
        let t0: Vec<f64> = centre
            .iter()
            .map(|c| c + PERTURB_SD * rng.sample::<f64, _>(StandardNormal))
            .collect();
        run(&t0, START_STEP, &mut best);
        used += 1;
    }
    for _ in 0..MAX_POLISH {
        let (t, f, _) = best.clone().expect("at least one start");
        run(&t, 0.1 * START_STEP, &mut best);
        let b = best.as_ref().unwrap();
        if !(b.1 < f - 1e-10 * f.abs()) {
            break;
        }
    }
    let (t, value, converged) = best.expect("at least one start");
    if !value.is_finite() {
        return Err(Error::Numerical(format!(
            "{family}: likelihood is not finite at any start"
        )));
    }
    Ok(RawFit {
        params: from_free(family, &t),
        value,
        converged,
        iterations,
        evaluations,
        starts: used,
    })
}

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    (m, v.max(1e-300))
}

/// A single-start fit used to seed richer families.
fn sub_fit(xs: &[f64], family: Family, opts: &MleOptions) -> Result<Vec<f64>> {
    let o = MleOptions {
        restarts: 1,
        ..opts.clone()
    };
    Ok(fit_standardized(xs, family, None, &o)?.params)
}

fn recipe_starts(xs: &[f64], family: Family, opts: &MleOptions) -> Result<Vec<Vec<f64>>> {
    let (m, v) = moments(xs);
    let med = quantile_sorted(xs, 0.5);
    let iqr = (quantile_sorted(xs, 0.75) - quantile_sorted(xs, 0.25)).max(1e-6);
    Ok(match family {
        Family::Ga => vec![vec![m * m / v, v / m]],
        Family::IGa => {
            let inv: Vec<f64> = xs.iter().map(|x| 1.0 / x).collect();
            let (mi, vi) = moments(&inv);
            vec![vec![mi * mi / vi, mi / vi]]
        }
        Family::GGa => {
            let g = sub_fit(xs, Family::Ga, opts)?;
            vec![vec![g[0], g[1], 1.0]]
        }
        Family::GIGa => {
            let g = sub_fit(xs, Family::IGa, opts)?;
            vec![vec![g[0], g[1], 1.0]]
        }
        Family::BP => {
            // BP(p, q, b) tends to IGa(q, p b) as p grows
            let g = sub_fit(xs, Family::IGa, opts)?;
            vec![vec![20.0, g[0], g[1] / 20.0]]
        }
        Family::GB2 => {
            let bp = sub_fit(xs, Family::BP, opts)?;
            // GB2(p, q, a, b) tends to GIGa(q, b p^(1/a), a) as p grows
            let gi = sub_fit(xs, Family::GIGa, opts)?;
            vec![
                vec![bp[0], bp[1], 1.0, bp[2]],
                vec![20.0, gi[0], gi[2], gi[1] / 20f64.powf(1.0 / gi[2])],
            ]
        }
        Family::N => vec![vec![m, v.sqrt()]],
        Family::GST => vec![vec![med, iqr / 1.53, 3.0]],
        Family::GCHU => vec![vec![1.0, 1.0, iqr / 2.0, med]],
        Family::S => {
            let skew = if m > med {
                0.5
            } else if m < med {
                -0.5
            } else {
                0.0
            };
            vec![vec![1.5, skew, iqr / 2.0, med]]
        }
    })
}
