//! Kolmogorov–Smirnov distance to a fitted distribution.

use crate::distributions::{cdf_sorted, DistributionSpec};
use crate::error::{Error, Result};

/// `D = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)` over the sorted sample.
pub fn ks_statistic(data: &[f64], spec: &DistributionSpec) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Data("KS statistic of an empty sample".into()));
    }
    if data.iter().any(|x| x.is_nan()) {
        return Err(Error::Data("KS statistic of a sample containing NaN".into()));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    ks_sorted(&sorted, spec)
}

pub(crate) fn ks_sorted(sorted: &[f64], spec: &DistributionSpec) -> Result<f64> {
    let cdf = cdf_sorted(spec, sorted)?;
    Ok(ks_from_cdf(&cdf))
}

/// KS distance given the model CDF at each sorted sample point.
pub fn ks_from_cdf(cdf: &[f64]) -> f64 {
    let n = cdf.len() as f64;
    cdf.iter()
        .enumerate()
        .map(|(i, &f)| {
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Two-sample KS distance between empirical distributions.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Data("two-sample KS with an empty sample".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}
