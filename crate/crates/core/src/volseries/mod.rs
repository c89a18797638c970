//! Return, realized-variance and autocorrelation series.
//!
//! Realized variance over a window of `n` daily log returns `r_i` is
//! annualized as `100² · (252/n) · Σ r_i²`, i.e. in squared index points
//! like the squared volatility indices it is compared with.

mod io;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub use io::{read_dated_csv, read_prices_csv, write_series_csv};

/// Trading days per year used for annualization.
pub const TRADING_DAYS: f64 = 252.0;

/// Daily closing prices (or index levels) on strictly increasing dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    closes: Vec<f64>,
}

impl PriceSeries {
    pub fn new(dates: Vec<NaiveDate>, closes: Vec<f64>) -> Result<Self> {
        if dates.len() != closes.len() {
            return domain(format!("{} dates but {} closes", dates.len(), closes.len()));
        }
        if dates.len() < 2 {
            return Err(Error::Data("a price series needs at least two rows".into()));
        }
        if let Some(w) = dates.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Data(format!("dates not strictly increasing at {}", w[1])));
        }
        if let Some((d, c)) = dates.iter().zip(&closes).find(|(_, c)| !(**c > 0.0 && c.is_finite())) {
            return Err(Error::Data(format!("non-positive close {c} on {d}")));
        }
        Ok(Self { dates, closes })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn closes(&self) -> &[f64] {
        &self.closes
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }
}

/// Daily log returns, each dated on the later of its two closes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub dates: Vec<NaiveDate>,
    /// Close date preceding each return.
    pub prior_dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

impl ReturnSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowMode {
    /// Windows slide by one day.
    #[default]
    Rolling,
    /// Consecutive non-overlapping windows.
    Disjoint,
}

/// Annualized realized variance over `window_n`-day windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceSeries {
    /// Date of the last return in each window.
    pub dates: Vec<NaiveDate>,
    /// Date of the close the window's first return is measured from, i.e.
    /// the trading day just before the window opens.
    pub origin_dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
    pub window_n: usize,
}

impl VarianceSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Windows whose end date lies in `[start, end)`; either bound may be open.
    pub fn between(&self, start: Option<NaiveDate>, end: Option<NaiveDate>) -> VarianceSeries {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let d = self.dates[i];
                start.is_none_or(|s| d >= s) && end.is_none_or(|e| d < e)
            })
            .collect();
        VarianceSeries {
            dates: keep.iter().map(|&i| self.dates[i]).collect(),
            origin_dates: keep.iter().map(|&i| self.origin_dates[i]).collect(),
            values: keep.iter().map(|&i| self.values[i]).collect(),
            window_n: self.window_n,
        }
    }
}

/// Any dated scalar series, e.g. a volatility index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatedSeries {
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

impl DatedSeries {
    pub fn new(dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return domain(format!("{} dates but {} values", dates.len(), values.len()));
        }
        if let Some(w) = dates.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Data(format!("dates not strictly increasing at {}", w[1])));
        }
        Ok(Self { dates, values })
    }

    /// Entries dated in `[start, end)`.
    pub fn between(&self, start: Option<NaiveDate>, end: Option<NaiveDate>) -> DatedSeries {
        let (dates, values) = self
            .dates
            .iter()
            .zip(&self.values)
            .filter(|(d, _)| start.is_none_or(|s| **d >= s) && end.is_none_or(|e| **d < e))
            .map(|(d, v)| (*d, *v))
            .unzip();
        DatedSeries { dates, values }
    }
}

impl From<PriceSeries> for DatedSeries {
    fn from(p: PriceSeries) -> Self {
        DatedSeries {
            dates: p.dates,
            values: p.closes,
        }
    }
}

impl From<&VarianceSeries> for DatedSeries {
    fn from(v: &VarianceSeries) -> Self {
        DatedSeries {
            dates: v.dates.clone(),
            values: v.values.clone(),
        }
    }
}

/// Sample autocorrelation at lags `1..=max_lag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfCurve {
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
}

pub fn log_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    let c = prices.closes();
    if c.iter().any(|v| !(*v > 0.0)) {
        return domain("log returns need positive prices");
    }
    Ok(ReturnSeries {
        dates: prices.dates()[1..].to_vec(),
        prior_dates: prices.dates()[..c.len() - 1].to_vec(),
        values: c.windows(2).map(|w| (w[1] / w[0]).ln()).collect(),
    })
}

pub fn realized_variance(returns: &ReturnSeries, n: usize, mode: WindowMode) -> Result<VarianceSeries> {
    if n == 0 {
        return domain("window length must be at least 1");
    }
    let len = returns.len();
    if n > len {
        return Err(Error::Data(format!("window of {n} days exceeds {len} returns")));
    }
    let scale = 100.0 * 100.0 * TRADING_DAYS / n as f64;
    let step = match mode {
        WindowMode::Rolling => 1,
        WindowMode::Disjoint => n,
    };
    // prefix sums would drift for long series; a direct sum per window is cheap enough
    let squares: Vec<f64> = returns.values.iter().map(|r| r * r).collect();
    let mut out = VarianceSeries {
        dates: Vec::new(),
        origin_dates: Vec::new(),
        values: Vec::new(),
        window_n: n,
    };
    let mut start = 0;
    while start + n <= len {
        let sum: f64 = squares[start..start + n].iter().sum();
        out.values.push(scale * sum);
        out.dates.push(returns.dates[start + n - 1]);
        out.origin_dates.push(returns.prior_dates[start]);
        start += step;
    }
    Ok(out)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `mean(a) / mean(b)`.
pub fn mean_ratio(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Data("mean ratio of an empty series".into()));
    }
    let mb = mean(b);
    if mb == 0.0 || !mb.is_finite() {
        return Err(Error::Data(format!("mean ratio denominator is {mb}")));
    }
    Ok(mean(a) / mb)
}

/// `implied - ratio · realized`, element-wise.
pub fn difference_series(implied: &[f64], realized: &[f64], ratio: f64) -> Result<Vec<f64>> {
    if implied.len() != realized.len() {
        return Err(Error::Data(format!(
            "difference of series with {} and {} entries",
            implied.len(),
            realized.len()
        )));
    }
    Ok(implied.iter().zip(realized).map(|(a, b)| a - ratio * b).collect())
}

/// Biased (divide-by-N) autocorrelation of the mean-removed series.
pub fn autocorrelation(values: &[f64], max_lag: usize) -> Result<AcfCurve> {
    let n = values.len();
    if max_lag == 0 || n <= max_lag + 1 {
        return Err(Error::Data(format!(
            "autocorrelation to lag {max_lag} needs more than {} points, got {n}",
            max_lag + 1
        )));
    }
    let m = mean(values);
    let centered: Vec<f64> = values.iter().map(|v| v - m).collect();
    let c0: f64 = centered.iter().map(|v| v * v).sum();
    if !(c0 > 0.0) {
        return Err(Error::DegenerateData("constant series has no autocorrelation".into()));
    }
    let lags: Vec<usize> = (1..=max_lag).collect();
    let vals = lags
        .iter()
        .map(|&k| {
            let ck: f64 = centered[..n - k].iter().zip(&centered[k..]).map(|(a, b)| a * b).sum();
            ck / c0
        })
        .collect();
    Ok(AcfCurve { lags, values: vals })
}

/// Implied-volatility observations paired with the realized variance of the
/// window that opens on the next trading day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedPairs {
    /// Observation dates of the implied series.
    pub dates: Vec<NaiveDate>,
    pub implied: Vec<f64>,
    pub realized: Vec<f64>,
}

impl AlignedPairs {
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }
}

/// Pairs each implied observation on trading day `t` with the realized window
/// whose first return is `t -> next trading day`. Dates without such a window
/// (holidays, series ends) are dropped.
pub fn align(implied: &DatedSeries, realized: &VarianceSeries) -> Result<AlignedPairs> {
    let mut out = AlignedPairs {
        dates: Vec::new(),
        implied: Vec::new(),
        realized: Vec::new(),
    };
    let origins = &realized.origin_dates;
    for (d, v) in implied.dates.iter().zip(&implied.values) {
        if let Ok(k) = origins.binary_search(d) {
            out.dates.push(*d);
            out.implied.push(*v);
            out.realized.push(realized.values[k]);
        }
    }
    if out.is_empty() {
        return Err(Error::Data("implied and realized series share no dates".into()));
    }
    Ok(out)
}

/// Rescaled implied-minus-realized series on aligned dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceSeries {
    pub pairs: AlignedPairs,
    /// `mean(implied) / mean(realized)` over the aligned pairs.
    pub ratio: f64,
    pub values: Vec<f64>,
}

/// Aligns `implied` index levels with `realized` variance and forms
/// `implied - ratio · realized`.
///
/// With `squared` the index is squared and compared to RV²; otherwise the
/// index level is compared to RV, and the ratio is that of unsquared means.
pub fn implied_minus_realized(
    implied: &DatedSeries,
    realized: &VarianceSeries,
    squared: bool,
) -> Result<DifferenceSeries> {
    let mut pairs = align(implied, realized)?;
    if squared {
        pairs.implied.iter_mut().for_each(|v| *v *= *v);
    } else {
        pairs.realized.iter_mut().for_each(|v| *v = v.sqrt());
    }
    let ratio = mean_ratio(&pairs.implied, &pairs.realized)?;
    let values = difference_series(&pairs.implied, &pairs.realized, ratio)?;
    Ok(DifferenceSeries { pairs, ratio, values })
}
