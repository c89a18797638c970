//! Browser bindings: density curves, SDE steady states and power transforms.
//!
//! Each export is a thin wrapper over a plain function so the logic also
//! runs (and is tested) natively.

use volfit::distributions::plot_curve;
use volfit::sdelab::{score_samples, simulate, steady_state_spec, SdeConfig};
use volfit::{DistributionSpec, Family};
use wasm_bindgen::prelude::*;

const BINS: usize = 60;
const CURVE_POINTS: usize = 300;
const TRANSFORM_SAMPLES: usize = 20_000;

fn spec_of(family: &str, params: &[f64]) -> Result<DistributionSpec, String> {
    let family: Family = family.parse().map_err(|e: volfit::Error| e.to_string())?;
    DistributionSpec::new(family, params.to_vec()).map_err(|e| e.to_string())
}

fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * q).round() as usize]
}

/// Bin centers and densities, normalized by the full sample size.
fn histogram(data: &[f64], lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let width = (hi - lo) / BINS as f64;
    let mut counts = vec![0usize; BINS];
    for &x in data {
        if x >= lo && x <= hi {
            counts[(((x - lo) / width) as usize).min(BINS - 1)] += 1;
        }
    }
    let centers = (0..BINS).map(|k| lo + width * (k as f64 + 0.5)).collect();
    let density = counts.iter().map(|&c| c as f64 / (data.len() as f64 * width)).collect();
    (centers, density)
}

/// Plot range of a positive sample: zero to its 99th percentile.
fn sample_range(data: &[f64]) -> Result<(f64, f64), String> {
    let mut sorted: Vec<f64> = data.iter().copied().filter(|x| x.is_finite()).collect();
    if sorted.len() < 2 {
        return Err("too few finite samples to plot".into());
    }
    sorted.sort_by(f64::total_cmp);
    let hi = sorted_quantile(&sorted, 0.99);
    if hi > 0.0 {
        Ok((0.0, hi))
    } else {
        Err("samples collapse at zero".into())
    }
}

fn curve_ys(spec: &DistributionSpec, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>), String> {
    // the positive families are evaluated just inside the origin
    let start = if spec.family().positive_support() && lo <= 0.0 {
        hi * 1e-4
    } else {
        lo
    };
    let curve = plot_curve(spec, start, hi, CURVE_POINTS).map_err(|e| e.to_string())?;
    Ok(curve.into_iter().unzip())
}

#[wasm_bindgen]
#[derive(Debug)]
pub struct Curve {
    law: String,
    xs: Vec<f64>,
    ys: Vec<f64>,
    front: Option<f64>,
    tail: Option<f64>,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn law(&self) -> String {
        self.law.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn ys(&self) -> Vec<f64> {
        self.ys.clone()
    }
    /// Power-law exponent of the density as `x -> 0`.
    #[wasm_bindgen(getter)]
    pub fn front(&self) -> Option<f64> {
        self.front
    }
    /// Power-law exponent of the density as `x -> ∞`.
    #[wasm_bindgen(getter)]
    pub fn tail(&self) -> Option<f64> {
        self.tail
    }
}

pub fn density_curve(family: &str, params: &[f64], lo: f64, hi: f64) -> Result<Curve, String> {
    let spec = spec_of(family, params)?;
    let (xs, ys) = curve_ys(&spec, lo, hi)?;
    let exps = spec.exponents().ok();
    Ok(Curve {
        law: spec.to_string(),
        xs,
        ys,
        front: exps.and_then(|e| e.front_exponent),
        tail: exps.and_then(|e| e.tail_exponent),
    })
}

/// Parameter names of a family, in order.
#[wasm_bindgen]
pub fn parameter_names(family: &str) -> Result<Vec<String>, JsError> {
    let family: Family = family
        .parse()
        .map_err(|e: volfit::Error| JsError::new(&e.to_string()))?;
    Ok(family.param_names().iter().map(|s| s.to_string()).collect())
}

/// Density of `family(params)` on `[lo, hi]`, e.g. `density("GB2", [2, 3, 1, 10], 0, 40)`.
#[wasm_bindgen]
pub fn density(family: &str, params: Vec<f64>, lo: f64, hi: f64) -> Result<Curve, JsError> {
    density_curve(family, &params, lo, hi).map_err(|e| JsError::new(&e))
}

/// Simulated histogram set against an analytic density.
#[wasm_bindgen]
#[derive(Debug)]
pub struct Comparison {
    law: String,
    params: Vec<f64>,
    bin_centers: Vec<f64>,
    bin_density: Vec<f64>,
    xs: Vec<f64>,
    ys: Vec<f64>,
    ks: f64,
    threshold: f64,
}

#[wasm_bindgen]
impl Comparison {
    #[wasm_bindgen(getter)]
    pub fn law(&self) -> String {
        self.law.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn params(&self) -> Vec<f64> {
        self.params.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_centers.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn bin_density(&self) -> Vec<f64> {
        self.bin_density.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn ys(&self) -> Vec<f64> {
        self.ys.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn ks(&self) -> f64 {
        self.ks
    }
    /// 95% Kolmogorov-Smirnov acceptance level for this sample size.
    #[wasm_bindgen(getter)]
    pub fn threshold(&self) -> f64 {
        self.threshold
    }
    #[wasm_bindgen(getter)]
    pub fn pass(&self) -> bool {
        self.ks <= self.threshold
    }
}

fn compare(samples: &[f64], spec: &DistributionSpec) -> Result<Comparison, String> {
    let score = score_samples(samples, spec).map_err(|e| e.to_string())?;
    let (lo, hi) = sample_range(samples)?;
    let (bin_centers, bin_density) = histogram(samples, lo, hi);
    let (xs, ys) = curve_ys(spec, lo, hi)?;
    Ok(Comparison {
        law: spec.to_string(),
        params: spec.params().to_vec(),
        bin_centers,
        bin_density,
        xs,
        ys,
        ks: score.ks,
        threshold: score.threshold,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_steady_state(
    eta: f64,
    theta: f64,
    alpha: f64,
    kappa2: f64,
    kappa_alpha: f64,
    paths: usize,
    samples_per_path: usize,
    seed: u64,
) -> Result<Comparison, String> {
    let mut cfg = SdeConfig::new(eta, theta, alpha, kappa2, kappa_alpha);
    cfg.n_paths = paths;
    cfg.samples_per_path = samples_per_path;
    cfg.seed = seed;
    let spec = steady_state_spec(&cfg).map_err(|e| e.to_string())?;
    let samples = simulate(&cfg).map_err(|e| e.to_string())?;
    compare(&samples, &spec)
}

/// Euler paths of the volatility SDE against its analytic stationary law.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn steady_state(
    eta: f64,
    theta: f64,
    alpha: f64,
    kappa2: f64,
    kappa_alpha: f64,
    paths: usize,
    samples_per_path: usize,
    seed: u32,
) -> Result<Comparison, JsError> {
    simulate_steady_state(
        eta,
        theta,
        alpha,
        kappa2,
        kappa_alpha,
        paths,
        samples_per_path,
        seed.into(),
    )
    .map_err(|e| JsError::new(&e))
}

pub fn transform_check(family: &str, params: &[f64], r: f64, seed: u64) -> Result<Comparison, String> {
    let spec = spec_of(family, params)?;
    let target = spec.power_transform(r).map_err(|e| e.to_string())?;
    let powered: Vec<f64> = spec
        .sample(TRANSFORM_SAMPLES, seed)
        .into_iter()
        .map(|x| x.powf(r))
        .collect();
    compare(&powered, &target)
}

/// Law of `X^r` for a GB2 or GIGa variable, checked against powered samples of `X`.
#[wasm_bindgen]
pub fn power_transform(family: &str, params: Vec<f64>, r: f64, seed: u32) -> Result<Comparison, JsError> {
    transform_check(family, &params, r, seed.into()).map_err(|e| JsError::new(&e))
}
