//! The stochastic volatility model
//!
//! ```text
//! dx = -η (x - θ x^(1-α)) dt + sqrt(κ₂² x² + κ_α² x^(2-α)) dW
//! ```
//!
//! and its stationary law. With both noise terms present the steady state
//! is GB2; without the power-law noise it is GIGa, without the
//! multiplicative noise GGa, and `α = 1` reduces these to BP, IGa and Ga.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionSpec, Family};
use crate::error::{domain, Error, Result};
use crate::fitting::{ks_band, ks_statistic};
use crate::rng::{derive_seed, seeded};

/// States are never allowed below this value.
pub const STATE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdeConfig {
    pub eta: f64,
    pub theta: f64,
    pub alpha: f64,
    pub kappa2: f64,
    pub kappa_alpha: f64,
    pub dt: f64,
    pub burn_in_steps: usize,
    pub sample_stride: usize,
    pub n_paths: usize,
    pub samples_per_path: usize,
    pub seed: u64,
}

impl SdeConfig {
    /// Model parameters with the default discretization: `dt = 1e-3/η`, a
    /// burn-in of 50 relaxation times, samples 5 relaxation times apart,
    /// 8 paths of 1250 samples each.
    pub fn new(eta: f64, theta: f64, alpha: f64, kappa2: f64, kappa_alpha: f64) -> Self {
        let dt = 1e-3 / eta;
        Self {
            eta,
            theta,
            alpha,
            kappa2,
            kappa_alpha,
            dt,
            burn_in_steps: (50.0 / (eta * dt)).ceil() as usize,
            sample_stride: (5.0 / (eta * dt)).ceil() as usize,
            n_paths: 8,
            samples_per_path: 1250,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                domain(format!("{name} must be positive, got {v}"))
            }
        };
        pos("eta", self.eta)?;
        pos("theta", self.theta)?;
        pos("dt", self.dt)?;
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return domain(format!("alpha must lie in (0, 2], got {}", self.alpha));
        }
        for (name, v) in [("kappa2", self.kappa2), ("kappa_alpha", self.kappa_alpha)] {
            if !(v >= 0.0 && v.is_finite()) {
                return domain(format!("{name} must be non-negative, got {v}"));
            }
        }
        if self.kappa2 == 0.0 && self.kappa_alpha == 0.0 {
            return domain("kappa2 and kappa_alpha cannot both be zero");
        }
        if !(self.dt * self.eta < 0.1) {
            return domain(format!("dt * eta = {} must be below 0.1", self.dt * self.eta));
        }
        if (self.burn_in_steps as f64) * self.dt < 20.0 / self.eta {
            return domain(format!(
                "burn-in of {} steps covers less than 20 relaxation times",
                self.burn_in_steps
            ));
        }
        if self.sample_stride == 0 || self.n_paths == 0 || self.samples_per_path == 0 {
            return domain("sample_stride, n_paths and samples_per_path must be positive");
        }
        Ok(())
    }

    pub fn total_samples(&self) -> usize {
        self.n_paths * self.samples_per_path
    }
}

/// Analytic stationary distribution.
pub fn steady_state_spec(cfg: &SdeConfig) -> Result<DistributionSpec> {
    cfg.validate()?;
    let SdeConfig {
        eta,
        theta,
        alpha,
        kappa2: k2,
        kappa_alpha: ka,
        ..
    } = *cfg;
    let p = (-1.0 + alpha + 2.0 * eta * theta / (ka * ka)) / alpha;
    let q = (1.0 + 2.0 * eta / (k2 * k2)) / alpha;
    let check = |name: &str, v: f64| {
        if v > 0.0 {
            Ok(())
        } else {
            domain(format!(
                "steady state is not normalizable: {name} = {v} must be positive"
            ))
        }
    };
    let unit = alpha == 1.0;
    if ka == 0.0 {
        check("q", q)?;
        let beta = (2.0 * eta * theta / (alpha * k2 * k2)).powf(1.0 / alpha);
        return if unit {
            DistributionSpec::new(Family::IGa, vec![q, beta])
        } else {
            DistributionSpec::new(Family::GIGa, vec![q, beta, alpha])
        };
    }
    if k2 == 0.0 {
        check("p", p)?;
        let beta = (alpha * ka * ka / (2.0 * eta)).powf(1.0 / alpha);
        return if unit {
            DistributionSpec::new(Family::Ga, vec![p, beta])
        } else {
            DistributionSpec::new(Family::GGa, vec![p, beta, alpha])
        };
    }
    check("p", p)?;
    check("q", q)?;
    let beta = (ka / k2).powf(2.0 / alpha);
    if unit {
        DistributionSpec::new(Family::BP, vec![p, q, beta])
    } else {
        DistributionSpec::new(Family::GB2, vec![p, q, alpha, beta])
    }
}

fn simulate_path(cfg: &SdeConfig, path: usize) -> Result<Vec<f64>> {
    let mut rng = seeded(derive_seed(cfg.seed, path as u64));
    let SdeConfig {
        eta,
        theta,
        alpha,
        kappa2,
        kappa_alpha,
        dt,
        ..
    } = *cfg;
    let (k2s, kas) = (kappa2 * kappa2, kappa_alpha * kappa_alpha);
    let sqrt_dt = dt.sqrt();
    let step = |x: f64, z: f64| -> f64 {
        let drift = -eta * (x - theta * x.powf(1.0 - alpha));
        let var = k2s * x * x + kas * x.powf(2.0 - alpha);
        let next = x + drift * dt + var.sqrt() * sqrt_dt * z;
        if next > STATE_FLOOR {
            next
        } else {
            STATE_FLOOR
        }
    };
    let mut x = theta.powf(1.0 / alpha);
    let mut out = Vec::with_capacity(cfg.samples_per_path);
    let total = cfg.burn_in_steps + cfg.sample_stride * cfg.samples_per_path;
    for i in 1..=total {
        x = step(x, rng.sample(StandardNormal));
        if !x.is_finite() {
            return Err(Error::Numerical(format!(
                "path {path} became non-finite at step {i}; try a smaller dt"
            )));
        }
        if i > cfg.burn_in_steps && (i - cfg.burn_in_steps).is_multiple_of(cfg.sample_stride) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Full-truncation Euler–Maruyama samples, concatenated in path order.
pub fn simulate(cfg: &SdeConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let paths: Vec<usize> = (0..cfg.n_paths).collect();
    #[cfg(feature = "parallel")]
    let results: Vec<Result<Vec<f64>>> = {
        use rayon::prelude::*;
        paths.par_iter().map(|&p| simulate_path(cfg, p)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<Vec<f64>>> = paths.iter().map(|&p| simulate_path(cfg, p)).collect();
    let mut out = Vec::with_capacity(cfg.total_samples());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Simulated samples scored against a stationary law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdeVerification {
    pub spec: DistributionSpec,
    pub ks: f64,
    pub threshold: f64,
    pub sample_count: usize,
    pub pass: bool,
}

/// Scores simulated samples against `spec`, passing when KS is within `1.36/√N`.
pub fn score_samples(samples: &[f64], spec: &DistributionSpec) -> Result<SdeVerification> {
    let ks = ks_statistic(samples, spec)?;
    let threshold = ks_band(samples.len());
    Ok(SdeVerification {
        spec: spec.clone(),
        ks,
        threshold,
        sample_count: samples.len(),
        pass: ks <= threshold,
    })
}

pub fn verify_against(cfg: &SdeConfig, spec: &DistributionSpec) -> Result<SdeVerification> {
    score_samples(&simulate(cfg)?, spec)
}

pub fn verify_steady_state(cfg: &SdeConfig) -> Result<SdeVerification> {
    verify_against(cfg, &steady_state_spec(cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_examples() {
        let bp = steady_state_spec(&SdeConfig::new(0.5, 2.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(bp.family(), Family::BP);
        assert_eq!(bp.params(), &[2.0, 2.0, 1.0]);
        let ga = steady_state_spec(&SdeConfig::new(1.0, 1.0, 1.0, 0.0, 1.0)).unwrap();
        assert_eq!(ga.family(), Family::Ga);
        assert_eq!(ga.params(), &[2.0, 0.5]);
        let iga = steady_state_spec(&SdeConfig::new(1.0, 1.5, 1.0, 1.0, 0.0)).unwrap();
        assert_eq!(iga.family(), Family::IGa);
        assert_eq!(iga.params(), &[3.0, 3.0]);
        for alpha in [0.3, 1.0, 1.7] {
            let s = steady_state_spec(&SdeConfig::new(1.0, 1.0, alpha, 0.7, 0.7)).unwrap();
            assert_eq!(*s.params().last().unwrap(), 1.0);
        }
    }

    #[test]
    fn validation() {
        assert!(SdeConfig::new(1.0, 1.0, 1.0, 0.0, 0.0).validate().is_err());
        let mut c = SdeConfig::new(1.0, 1.0, 1.0, 1.0, 1.0);
        c.dt = 0.2;
        assert!(c.validate().is_err());
        let mut c = SdeConfig::new(1.0, 1.0, 1.0, 1.0, 1.0);
        c.burn_in_steps = 10;
        assert!(c.validate().is_err());
        // p = (-1 + 0.5 + 2*0.01*1/1)/0.5 < 0
        let c = SdeConfig::new(0.01, 1.0, 0.5, 1.0, 1.0);
        assert!(steady_state_spec(&c).is_err());
    }

    #[test]
    fn deterministic_positive_samples() {
        let mut c = SdeConfig::new(1.0, 1.0, 0.5, 0.5, 0.5);
        c.dt = 0.01;
        c.burn_in_steps = 2000;
        c.sample_stride = 50;
        c.samples_per_path = 40;
        c.n_paths = 3;
        let a = simulate(&c).unwrap();
        assert_eq!(a, simulate(&c).unwrap());
        assert_eq!(a.len(), 120);
        assert!(a.iter().all(|x| *x > 0.0));
    }
}
