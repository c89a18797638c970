//! Fits of every family across a range of window lengths.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::mle::{mle_fit_with, MleOptions};
use super::tail::{tail_fit, TailFit, TailOptions};
use super::FitResult;
use crate::distributions::Family;
use crate::error::{domain, Error, Result};
use crate::rng::derive_seed;
use crate::volseries::{realized_variance, ReturnSeries, WindowMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub mle: MleOptions,
    pub tail: TailOptions,
    pub mode: WindowMode,
    /// Keep windows ending in `[start, end)`; either bound may be open.
    #[serde(default)]
    pub start: Option<NaiveDate>,
    #[serde(default)]
    pub end: Option<NaiveDate>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            mle: MleOptions::default(),
            tail: TailOptions::default(),
            mode: WindowMode::Rolling,
            start: None,
            end: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub n: usize,
    pub family: Family,
    pub fit: Option<FitResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTail {
    pub n: usize,
    pub tail: Option<TailFit>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n_values: Vec<usize>,
    pub families: Vec<Family>,
    /// One entry per `(n, family)`, ordered by `n` then family.
    pub entries: Vec<SweepEntry>,
    pub tails: Vec<SweepTail>,
}

impl SweepReport {
    pub fn get(&self, n: usize, family: Family) -> Option<&SweepEntry> {
        self.entries.iter().find(|e| e.n == n && e.family == family)
    }
}

enum Task {
    Fit(usize, Family),
    Tail(usize),
}

enum Outcome {
    Fit(SweepEntry),
    Tail(SweepTail),
}

/// Fits each family to the rolling (or disjoint) realized variance for every
/// window length in `n_values`. Individual failures are recorded in the report.
pub fn n_sweep(
    returns: &ReturnSeries,
    n_values: &[usize],
    families: &[Family],
    opts: &SweepOptions,
) -> Result<SweepReport> {
    if n_values.is_empty() || families.is_empty() {
        return domain("sweep needs at least one window length and one family");
    }
    if n_values.contains(&0) {
        return domain("window lengths must be positive");
    }
    let mut n_values = n_values.to_vec();
    n_values.sort_unstable();
    n_values.dedup();
    let max_n = *n_values.last().unwrap();
    if max_n > returns.len() {
        return Err(Error::Data(format!(
            "window of {max_n} days exceeds {} returns",
            returns.len()
        )));
    }
    let series: Vec<Vec<f64>> = n_values
        .iter()
        .map(|&n| realized_variance(returns, n, opts.mode).map(|v| v.between(opts.start, opts.end).values))
        .collect::<Result<_>>()?;
    let mut tasks = Vec::new();
    for (k, &n) in n_values.iter().enumerate() {
        for &f in families {
            tasks.push((k, Task::Fit(n, f)));
        }
        tasks.push((k, Task::Tail(n)));
    }
    let run = |(k, task): &(usize, Task)| -> Outcome {
        let data = &series[*k];
        match *task {
            Task::Fit(n, family) => {
                let mle = MleOptions {
                    seed: derive_seed(opts.mle.seed, n as u64),
                    ..opts.mle.clone()
                };
                let (fit, error) = match mle_fit_with(data, family, None, &mle) {
                    Ok(f) => (Some(f), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                Outcome::Fit(SweepEntry { n, family, fit, error })
            }
            Task::Tail(n) => {
                let (tail, error) = match tail_fit(data, &opts.tail) {
                    Ok(t) => (Some(t), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                Outcome::Tail(SweepTail { n, tail, error })
            }
        }
    };
    #[cfg(feature = "parallel")]
    let outcomes: Vec<Outcome> = {
        use rayon::prelude::*;
        tasks.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<Outcome> = tasks.iter().map(run).collect();
    let mut report = SweepReport {
        n_values,
        families: families.to_vec(),
        entries: Vec::new(),
        tails: Vec::new(),
    };
    for o in outcomes {
        match o {
            Outcome::Fit(e) => report.entries.push(e),
            Outcome::Tail(t) => report.tails.push(t),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    #[test]
    fn one_result_per_window() {
        let spec = crate::DistributionSpec::new(Family::N, vec![0.0, 0.01]).unwrap();
        let values = spec.sample(600, 11);
        let d0 = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();
        let dates: Vec<NaiveDate> = (0..=600).map(|i| d0 + chrono::Days::new(i)).collect();
        let returns = ReturnSeries {
            dates: dates[1..].to_vec(),
            prior_dates: dates[..600].to_vec(),
            values,
        };
        let opts = SweepOptions {
            mle: MleOptions {
                restarts: 1,
                ..Default::default()
            },
            ..Default::default()
        };
        let r = n_sweep(&returns, &[5, 1, 5], &[Family::Ga], &opts).unwrap();
        assert_eq!(r.n_values, vec![1, 5]);
        assert_eq!(r.entries.len(), 2);
        assert!(r.get(5, Family::Ga).unwrap().fit.is_some());
        assert_eq!(r.tails.len(), 2);
        assert!(n_sweep(&returns, &[700], &[Family::Ga], &opts).is_err());
    }
}
