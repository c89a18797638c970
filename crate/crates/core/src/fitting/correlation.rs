//! Correlation recovered from the spread of a difference series.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    pub rho: f64,
    /// Set when `rho` falls outside `[-1, 1]`, which only inconsistent
    /// inputs can produce. The value is not clamped.
    pub out_of_range: bool,
}

/// `ρ = (σ_a² + σ_b² - σ_{a-b}²) / (2 σ_a σ_b)`.
pub fn correlation_from_difference(sigma_a: f64, sigma_b: f64, sigma_diff: f64) -> Result<CorrelationEstimate> {
    if !(sigma_a > 0.0 && sigma_b > 0.0) {
        return domain(format!(
            "standard deviations must be positive, got {sigma_a} and {sigma_b}"
        ));
    }
    if !(sigma_diff >= 0.0) {
        return domain(format!("difference spread must be non-negative, got {sigma_diff}"));
    }
    let rho = (sigma_a * sigma_a + sigma_b * sigma_b - sigma_diff * sigma_diff) / (2.0 * sigma_a * sigma_b);
    Ok(CorrelationEstimate {
        rho,
        out_of_range: !(-1.0..=1.0).contains(&rho),
    })
}

/// Divide-by-N standard deviation.
pub fn population_std(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Data("standard deviation of an empty series".into()));
    }
    let n = values.len() as f64;
    let m = values.iter().sum::<f64>() / n;
    Ok((values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n).sqrt())
}

/// Sample Pearson correlation.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Data("Pearson correlation needs equal, non-empty series".into()));
    }
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if !(saa > 0.0 && sbb > 0.0) {
        return Err(Error::DegenerateData("correlation with a constant series".into()));
    }
    Ok(sab / (saa * sbb).sqrt())
}
