//! Log-log regression of the empirical tail density.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Straight-line fit `ln density = intercept + slope · ln x` over a tail window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub slope: f64,
    pub intercept: f64,
    pub window: [f64; 2],
    pub point_count: usize,
    /// `(x, density)` at the centre of every non-empty bin.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailOptions {
    pub q_lo: f64,
    pub q_hi: f64,
    pub bins: usize,
}

impl Default for TailOptions {
    fn default() -> Self {
        Self {
            q_lo: 0.90,
            q_hi: 0.999,
            bins: 20,
        }
    }
}

fn order_statistic(sorted: &[f64], q: f64) -> f64 {
    let k = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[k - 1]
}

/// Histogram on `bins` logarithmic bins between the `q_lo` and `q_hi` sample
/// quantiles, normalized as a density of the whole sample, then OLS of
/// `ln density` on `ln x`.
pub fn tail_fit(data: &[f64], opts: &TailOptions) -> Result<TailFit> {
    let TailOptions { q_lo, q_hi, bins } = *opts;
    if !(0.5..1.0).contains(&q_lo) || !(q_hi > q_lo && q_hi <= 1.0) {
        return domain(format!(
            "tail window [{q_lo}, {q_hi}] must satisfy 0.5 <= q_lo < q_hi <= 1"
        ));
    }
    if bins < 3 {
        return domain("tail fit needs at least 3 bins");
    }
    let mut sorted: Vec<f64> = data.iter().copied().filter(|x| x.is_finite()).collect();
    if sorted.is_empty() {
        return Err(Error::Data("tail fit of an empty sample".into()));
    }
    sorted.sort_by(f64::total_cmp);
    let x_lo = order_statistic(&sorted, q_lo);
    let x_hi = order_statistic(&sorted, q_hi);
    if !(x_lo > 0.0) || !(x_hi > x_lo) {
        return Err(Error::Data(format!(
            "tail window [{x_lo}, {x_hi}] is empty or not positive"
        )));
    }
    let (l_lo, l_hi) = (x_lo.ln(), x_hi.ln());
    let width = (l_hi - l_lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let start = sorted.partition_point(|&x| x < x_lo);
    for &x in &sorted[start..] {
        if x > x_hi {
            break;
        }
        let k = (((x.ln() - l_lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let n = sorted.len() as f64;
    let points: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0)
        .map(|(k, &c)| {
            let a = (l_lo + width * k as f64).exp();
            let b = (l_lo + width * (k + 1) as f64).exp();
            ((a * b).sqrt(), c as f64 / (n * (b - a)))
        })
        .collect();
    if points.len() < 3 {
        return Err(Error::Data(format!(
            "insufficient tail: {} non-empty bins in [{x_lo}, {x_hi}]",
            points.len()
        )));
    }
    let (slope, intercept) = ols(points.iter().map(|(x, d)| (x.ln(), d.ln())));
    Ok(TailFit {
        slope,
        intercept,
        window: [x_lo, x_hi],
        point_count: points.len(),
        points,
    })
}

fn ols(pts: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64) {
    let n = pts.clone().count() as f64;
    let (sx, sy) = pts.clone().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
