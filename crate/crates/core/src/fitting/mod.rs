//! Maximum-likelihood fitting and goodness-of-fit tools.

mod acf;
mod correlation;
mod ks;
mod likelihood;
mod mle;
pub mod simplex;
mod sweep;
mod table;
mod tail;

use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionSpec, ExponentReport};

pub use acf::{acf_fit, AcfFit, MIN_LAGS};
pub use correlation::{correlation_from_difference, pearson, population_std, CorrelationEstimate};
pub use ks::{ks_from_cdf, ks_statistic, ks_two_sample};
pub use mle::{mle_fit, mle_fit_with, MleOptions, OptimizerSummary, MIN_SAMPLES};
pub use sweep::{n_sweep, SweepEntry, SweepOptions, SweepReport, SweepTail};
pub use table::{render_csv, render_markdown, FitRow};
pub use tail::{tail_fit, TailFit, TailOptions};

/// Outcome of a maximum-likelihood fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub spec: DistributionSpec,
    pub log_likelihood: f64,
    /// KS distance between the fitted law and the data it was fitted to.
    pub ks: f64,
    /// Front/tail exponents; absent for the difference families.
    pub exponents: Option<ExponentReport>,
    pub sample_size: usize,
    pub converged: bool,
    pub optimizer: OptimizerSummary,
}

/// The 95% KS acceptance band `1.36 / √n`.
pub fn ks_band(n: usize) -> f64 {
    1.36 / (n as f64).sqrt()
}
