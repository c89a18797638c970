use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::Context;
use chrono::{Datelike, NaiveDate};
use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use volfit::distributions::plot_curve;
use volfit::fitting::{
    acf_fit, correlation_from_difference, mle_fit_with, n_sweep, pearson, population_std, render_csv, render_markdown,
    tail_fit, AcfFit, CorrelationEstimate, FitRow, MleOptions, SweepOptions, SweepReport, TailFit,
};
use volfit::rng::derive_seed;
use volfit::sdelab::{score_samples, simulate, steady_state_spec, SdeConfig, SdeVerification};
use volfit::volseries::{
    autocorrelation, implied_minus_realized, log_returns, read_dated_csv, read_prices_csv, realized_variance,
    write_series_csv, DatedSeries, ReturnSeries, VarianceSeries, WindowMode,
};
use volfit::{DistributionSpec, Error, Family};

use crate::config::{config_error, Index, RunConfig, Sampling, Target};
use crate::output::{curves_csv, histogram_csv, plot_range, RunDir};

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    let file = File::open(path).map_err(|e| config_error(format!("cannot open {}: {e}", path.display())))?;
    Ok(BufReader::new(file))
}

fn returns(cfg: &RunConfig) -> anyhow::Result<ReturnSeries> {
    let path = cfg.input("prices")?;
    let prices = read_prices_csv(open(path)?).with_context(|| format!("reading {}", path.display()))?;
    Ok(log_returns(&prices)?)
}

fn variance(cfg: &RunConfig, returns: &ReturnSeries, n: usize) -> anyhow::Result<VarianceSeries> {
    let rv = realized_variance(returns, n, cfg.mode)?.between(cfg.start, cfg.end);
    if rv.is_empty() {
        return Err(Error::Data(format!("no {n}-day windows end inside the date range")).into());
    }
    Ok(rv)
}

fn index(cfg: &RunConfig, which: Index) -> anyhow::Result<DatedSeries> {
    let path = cfg.input(which.name())?;
    let series = read_dated_csv(open(path)?).with_context(|| format!("reading {}", path.display()))?;
    Ok(series)
}

/// Last quote of every calendar month.
fn month_end(series: &DatedSeries) -> DatedSeries {
    let mut keep = Vec::new();
    for i in 0..series.dates.len() {
        let d = series.dates[i];
        let last = series
            .dates
            .get(i + 1)
            .is_none_or(|next| (next.year(), next.month()) != (d.year(), d.month()));
        if last {
            keep.push(i);
        }
    }
    DatedSeries {
        dates: keep.iter().map(|&i| series.dates[i]).collect(),
        values: keep.iter().map(|&i| series.values[i]).collect(),
    }
}

/// Reads the last column of a headed CSV as plain values.
fn read_samples(path: &Path) -> anyhow::Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(open(path)?);
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i as u64 + 2;
        let record = record.map_err(|e| Error::Csv {
            line,
            message: e.to_string(),
        })?;
        let field = record.iter().next_back().unwrap_or("");
        let v: f64 = field.parse().map_err(|_| Error::Csv {
            line,
            message: format!("'{field}' is not a number"),
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Data(format!("{} holds no samples", path.display())).into());
    }
    Ok(out)
}

/// Rows in family order, plus the first error when no family could be fitted.
fn fit_rows(data: &[f64], families: &[Family], opts: &MleOptions) -> (Vec<FitRow>, Option<Error>) {
    let results: Vec<(Family, volfit::Result<volfit::fitting::FitResult>)> = families
        .par_iter()
        .map(|&f| {
            info!("fitting {f} to {} samples", data.len());
            (f, mle_fit_with(data, f, None, opts))
        })
        .collect();
    let all_failed = results.iter().all(|(_, r)| r.is_err());
    let mut first = None;
    let mut rows = Vec::with_capacity(results.len());
    for (f, r) in results {
        match r {
            Err(e) if all_failed && first.is_none() => {
                rows.push(FitRow {
                    family: f,
                    fit: None,
                    error: Some(e.to_string()),
                });
                first = Some(e);
            }
            r => rows.push(FitRow::new(f, r)),
        }
    }
    (rows, first)
}

fn mle_options(cfg: &RunConfig, seed: u64) -> MleOptions {
    MleOptions {
        restarts: cfg.restarts,
        seed,
        ..MleOptions::default()
    }
}

fn print_table(dir: &RunDir, md: &str) {
    println!("{}", dir.root().display());
    print!("{md}");
}

fn plot_fits(dir: &RunDir, data: &[f64], rows: &[FitRow]) -> anyhow::Result<()> {
    if let Some((lo, hi)) = plot_range(data) {
        dir.plotdata("histogram.csv", &histogram_csv(data, lo, hi))?;
        dir.plotdata("pdf_curves.csv", &curves_csv(rows, lo, hi))?;
    }
    Ok(())
}

fn tail_points_csv(tails: &[(usize, &TailFit)]) -> String {
    let mut out = String::from("n,x,density\n");
    for (n, t) in tails {
        for (x, d) in &t.points {
            let _ = writeln!(out, "{n},{x},{d}");
        }
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RvSummary {
    pub window_n: usize,
    pub mode: WindowMode,
    pub windows: usize,
    pub first: NaiveDate,
    pub last: NaiveDate,
    pub mean: f64,
}

pub fn rv(cfg: &RunConfig) -> anyhow::Result<()> {
    let returns = returns(cfg)?;
    let rv = variance(cfg, &returns, cfg.n)?;
    let dir = RunDir::create(&cfg.out, "rv", &cfg.formats)?;
    let kept: Vec<usize> = (0..returns.len())
        .filter(|&i| {
            let d = returns.dates[i];
            cfg.start.is_none_or(|s| d >= s) && cfg.end.is_none_or(|e| d < e)
        })
        .collect();
    let mut buf = Vec::new();
    write_series_csv(
        &mut buf,
        &kept.iter().map(|&i| returns.dates[i]).collect::<Vec<_>>(),
        &kept.iter().map(|&i| returns.values[i]).collect::<Vec<_>>(),
    )?;
    dir.table_csv("returns.csv", std::str::from_utf8(&buf)?)?;
    let mut buf = Vec::new();
    write_series_csv(&mut buf, &rv.dates, &rv.values)?;
    dir.table_csv("rv2.csv", std::str::from_utf8(&buf)?)?;

    let summary = RvSummary {
        window_n: rv.window_n,
        mode: cfg.mode,
        windows: rv.len(),
        first: rv.dates[0],
        last: rv.dates[rv.len() - 1],
        mean: volfit::volseries::mean(&rv.values),
    };
    let csv = format!(
        "window_n,mode,windows,first,last,mean\n{},{:?},{},{},{},{}\n",
        summary.window_n, summary.mode, summary.windows, summary.first, summary.last, summary.mean
    )
    .to_lowercase();
    let md = format!(
        "| n | mode | windows | first | last | mean RV² |\n|---|---|---|---|---|---|\n| {} | {:?} | {} | {} | {} | {:.4} |\n",
        summary.window_n, summary.mode, summary.windows, summary.first, summary.last, summary.mean
    );
    dir.table("rv_summary", &summary, &csv, &md)?;
    print_table(&dir, &md);
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FitTable {
    pub target: String,
    pub sample_size: usize,
    pub start: Option<NaiveDate>,
    pub end: Option<NaiveDate>,
    pub tail: Option<TailFit>,
    pub rows: Vec<FitRow>,
}

fn target_values(cfg: &RunConfig, target: Target) -> anyhow::Result<(Vec<f64>, u64)> {
    let from_index = |which: Index, square: bool| -> anyhow::Result<(Vec<f64>, u64)> {
        let mut s = index(cfg, which)?.between(cfg.start, cfg.end);
        if cfg.fit.index_sampling == Sampling::MonthEnd {
            s = month_end(&s);
        }
        if s.values.is_empty() {
            return Err(Error::Data(format!("no {} quotes inside the date range", which.name())).into());
        }
        let values = if square {
            s.values.iter().map(|v| v * v).collect()
        } else {
            s.values
        };
        Ok((values, cfg.seed))
    };
    match target {
        Target::Rv2 | Target::Rv => {
            let rv = variance(cfg, &returns(cfg)?, cfg.n)?;
            let values = if target == Target::Rv {
                rv.values.iter().map(|v| v.sqrt()).collect()
            } else {
                rv.values
            };
            // same stream as the sweep uses for this window length
            Ok((values, derive_seed(cfg.seed, cfg.n as u64)))
        }
        Target::Vix2 => from_index(Index::Vix, true),
        Target::Vix => from_index(Index::Vix, false),
        Target::Vxo2 => from_index(Index::Vxo, true),
        Target::Vxo => from_index(Index::Vxo, false),
        Target::Samples => Ok((read_samples(cfg.input("samples")?)?, cfg.seed)),
    }
}

pub fn fit(cfg: &RunConfig) -> anyhow::Result<()> {
    let target = cfg.fit.target;
    let (data, seed) = target_values(cfg, target)?;
    let families = cfg.families.clone().unwrap_or_else(|| Family::VARIANCE.to_vec());
    let (rows, failure) = fit_rows(&data, &families, &mle_options(cfg, seed));
    let tail = if data.iter().all(|x| *x > 0.0) {
        tail_fit(&data, &cfg.tail)
            .map_err(|e| warn!("tail fit skipped: {e}"))
            .ok()
    } else {
        None
    };
    let dir = RunDir::create(&cfg.out, &format!("fit-{}", target.name()), &cfg.formats)?;
    let md = render_markdown(&rows);
    let table = FitTable {
        target: target.name().into(),
        sample_size: data.len(),
        start: cfg.start,
        end: cfg.end,
        tail,
        rows,
    };
    dir.table("fit", &table, &render_csv(&table.rows), &md)?;
    plot_fits(&dir, &data, &table.rows)?;
    if let Some(t) = &table.tail {
        dir.plotdata("tail_points.csv", &tail_points_csv(&[(cfg.n, t)]))?;
    }
    print_table(&dir, &md);
    match failure {
        Some(e) => Err(anyhow::Error::new(e).context("no family could be fitted")),
        None => Ok(()),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiffTable {
    pub implied: String,
    pub squared: bool,
    pub window_n: usize,
    pub sample_size: usize,
    pub start: Option<NaiveDate>,
    pub end: Option<NaiveDate>,
    /// Mean implied over mean realized on the aligned dates.
    pub ratio: f64,
    /// Correlation of implied and rescaled realized from the difference spread.
    pub correlation: Option<CorrelationEstimate>,
    pub pearson: Option<f64>,
    pub rows: Vec<FitRow>,
}

pub fn diff(cfg: &RunConfig) -> anyhow::Result<()> {
    let which = cfg.diff.implied;
    let rv = variance(cfg, &returns(cfg)?, cfg.n)?;
    let implied = index(cfg, which)?.between(cfg.start, cfg.end);
    let d = implied_minus_realized(&implied, &rv, cfg.diff.squared)?;
    let scaled: Vec<f64> = d.pairs.realized.iter().map(|v| d.ratio * v).collect();
    let correlation = (|| {
        correlation_from_difference(
            population_std(&d.pairs.implied)?,
            population_std(&scaled)?,
            population_std(&d.values)?,
        )
    })()
    .map_err(|e| warn!("correlation skipped: {e}"))
    .ok();
    let families = cfg.diff.families.clone().unwrap_or_else(|| Family::DIFFERENCE.to_vec());
    let (rows, failure) = fit_rows(&d.values, &families, &mle_options(cfg, cfg.seed));
    let name = format!("diff-{}{}", which.name(), if cfg.diff.squared { "2" } else { "" });
    let dir = RunDir::create(&cfg.out, &name, &cfg.formats)?;
    let md = render_markdown(&rows);
    let table = DiffTable {
        implied: which.name().into(),
        squared: cfg.diff.squared,
        window_n: cfg.n,
        sample_size: d.values.len(),
        start: cfg.start,
        end: cfg.end,
        ratio: d.ratio,
        correlation,
        pearson: pearson(&d.pairs.implied, &scaled).ok().filter(|r| r.is_finite()),
        rows,
    };
    dir.table("diff", &table, &render_csv(&table.rows), &md)?;
    plot_fits(&dir, &d.values, &table.rows)?;
    let mut pairs = String::from("date,implied,realized,difference\n");
    for i in 0..d.values.len() {
        let _ = writeln!(
            pairs,
            "{},{},{},{}",
            d.pairs.dates[i], d.pairs.implied[i], d.pairs.realized[i], d.values[i]
        );
    }
    dir.plotdata("pairs.csv", &pairs)?;
    print_table(&dir, &md);
    println!("ratio {:.4}", d.ratio);
    match failure {
        Some(e) => Err(anyhow::Error::new(e).context("no family could be fitted")),
        None => Ok(()),
    }
}

pub fn sweep(cfg: &RunConfig) -> anyhow::Result<()> {
    let returns = returns(cfg)?;
    let families = cfg.families.clone().unwrap_or_else(|| Family::VARIANCE.to_vec());
    let opts = SweepOptions {
        mle: mle_options(cfg, cfg.seed),
        tail: cfg.tail,
        mode: cfg.mode,
        start: cfg.start,
        end: cfg.end,
    };
    let report: SweepReport = n_sweep(&returns, &cfg.sweep.n_values, &families, &opts)?;
    let dir = RunDir::create(&cfg.out, "sweep", &cfg.formats)?;

    let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut csv = String::from("n,family,ks,front_exponent,tail_exponent,log_likelihood,error\n");
    for e in &report.entries {
        let exps = e.fit.as_ref().and_then(|f| f.exponents);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            e.n,
            e.family,
            num(e.fit.as_ref().map(|f| f.ks)),
            num(exps.and_then(|x| x.front_exponent)),
            num(exps.and_then(|x| x.tail_exponent)),
            num(e.fit.as_ref().map(|f| f.log_likelihood)),
            e.error.as_deref().unwrap_or("").replace([',', '\n'], ";"),
        );
    }
    let mut md = format!(
        "| n | {} |\n|---|{}\n",
        report.families.iter().map(|f| f.name()).collect::<Vec<_>>().join(" | "),
        "---|".repeat(report.families.len())
    );
    let mut ks_curves = format!(
        "n,{}\n",
        report.families.iter().map(|f| f.name()).collect::<Vec<_>>().join(",")
    );
    let mut exp_curves = String::from("n");
    for f in &report.families {
        let _ = write!(exp_curves, ",{f}_front,{f}_tail");
    }
    exp_curves.push('\n');
    for &n in &report.n_values {
        let entries: Vec<_> = report
            .families
            .iter()
            .map(|&f| report.get(n, f).and_then(|e| e.fit.as_ref()))
            .collect();
        let ks: Vec<String> = entries.iter().map(|f| num(f.map(|f| f.ks))).collect();
        let _ = writeln!(ks_curves, "{n},{}", ks.join(","));
        let cells: Vec<String> = entries
            .iter()
            .map(|f| f.map(|f| format!("{:.4}", f.ks)).unwrap_or("failed".into()))
            .collect();
        let _ = writeln!(md, "| {n} | {} |", cells.join(" | "));
        let _ = write!(exp_curves, "{n}");
        for f in &entries {
            let e = f.and_then(|f| f.exponents);
            let _ = write!(
                exp_curves,
                ",{},{}",
                num(e.and_then(|x| x.front_exponent)),
                num(e.and_then(|x| x.tail_exponent))
            );
        }
        exp_curves.push('\n');
    }
    dir.table("sweep", &report, &csv, &md)?;

    let mut tails = String::from("n,slope,intercept,x_lo,x_hi,point_count,error\n");
    for t in &report.tails {
        match &t.tail {
            Some(fit) => {
                let _ = writeln!(
                    tails,
                    "{},{},{},{},{},{},",
                    t.n, fit.slope, fit.intercept, fit.window[0], fit.window[1], fit.point_count
                );
            }
            None => {
                let _ = writeln!(
                    tails,
                    "{},,,,,,{}",
                    t.n,
                    t.error.as_deref().unwrap_or("").replace([',', '\n'], ";")
                );
            }
        }
    }
    dir.table_csv("sweep_tails.csv", &tails)?;
    dir.plotdata("ks_curves.csv", &ks_curves)?;
    dir.plotdata("exponent_curves.csv", &exp_curves)?;
    let fitted: Vec<(usize, &TailFit)> = report
        .tails
        .iter()
        .filter_map(|t| t.tail.as_ref().map(|f| (t.n, f)))
        .collect();
    dir.plotdata("tail_points.csv", &tail_points_csv(&fitted))?;
    print_table(&dir, &md);
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AcfReport {
    pub window_n: usize,
    pub sample_size: usize,
    pub max_lag: usize,
    /// Simultaneous white-noise band `4/√N`.
    pub noise_band: f64,
    /// Every lag lies inside the noise band, so no decay can be fitted.
    pub degenerate: bool,
    pub fit: Option<AcfFit>,
    pub error: Option<String>,
}

pub fn acf(cfg: &RunConfig) -> anyhow::Result<()> {
    let rv = variance(cfg, &returns(cfg)?, cfg.acf.n)?;
    let curve = autocorrelation(&rv.values, cfg.acf.max_lag)?;
    let noise_band = 4.0 / (rv.len() as f64).sqrt();
    let degenerate = curve.values.iter().all(|v| v.abs() <= noise_band);
    let (fit, error) = match acf_fit(&curve) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    if degenerate {
        warn!("autocorrelation is within the white-noise band; the decay fit is not meaningful");
    }
    let report = AcfReport {
        window_n: cfg.acf.n,
        sample_size: rv.len(),
        max_lag: cfg.acf.max_lag,
        noise_band,
        degenerate,
        fit,
        error,
    };
    let dir = RunDir::create(&cfg.out, "acf", &cfg.formats)?;
    let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let csv = format!(
        "a,b,c,residual_sse,degenerate\n{},{},{},{},{}\n",
        num(fit.map(|f| f.a)),
        num(fit.map(|f| f.b)),
        num(fit.map(|f| f.c)),
        num(fit.map(|f| f.residual_sse)),
        degenerate
    );
    let md = match fit {
        Some(f) => format!(
            "| a | b | c | degenerate |\n|---|---|---|---|\n| {:.4} | {:.4} | {:.4} | {degenerate} |\n",
            f.a, f.b, f.c
        ),
        None => format!(
            "| a | b | c | degenerate |\n|---|---|---|---|\n| failed: {} | | | {degenerate} |\n",
            report.error.as_deref().unwrap_or("")
        ),
    };
    dir.table("acf_fit", &report, &csv, &md)?;
    let mut points = String::from("lag,acf,fit\n");
    for (k, v) in curve.lags.iter().zip(&curve.values) {
        let _ = writeln!(points, "{k},{v},{}", num(fit.map(|f| f.eval(*k as f64))));
    }
    dir.plotdata("acf.csv", &points)?;
    print_table(&dir, &md);
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SdeReport {
    pub config: SdeConfig,
    /// Steady state implied by the model parameters.
    pub analytic: DistributionSpec,
    pub perturb_q: Option<f64>,
    pub verification: SdeVerification,
}

fn perturb_q(spec: &DistributionSpec, factor: f64) -> anyhow::Result<DistributionSpec> {
    let k = match spec.family() {
        Family::GB2 | Family::BP => 1,
        Family::GIGa | Family::IGa => 0,
        f => {
            return Err(config_error(format!(
                "the {f} steady state has no q parameter to perturb"
            )))
        }
    };
    let mut p = spec.params().to_vec();
    p[k] *= factor;
    DistributionSpec::new(spec.family(), p).map_err(|e| config_error(format!("perturbed spec: {e}")))
}

pub fn sde_verify(cfg: &RunConfig) -> anyhow::Result<()> {
    let section = cfg
        .sde
        .as_ref()
        .ok_or_else(|| config_error("sde-verify needs an [sde] section"))?;
    let sde = section.to_config(cfg.seed);
    sde.validate().map_err(|e| config_error(e.to_string()))?;
    let analytic = steady_state_spec(&sde)?;
    let target = match section.perturb_q {
        Some(f) => perturb_q(&analytic, f)?,
        None => analytic.clone(),
    };
    info!("simulating {} paths x {} samples", sde.n_paths, sde.samples_per_path);
    let samples = simulate(&sde)?;
    let verification = score_samples(&samples, &target)?;
    let report = SdeReport {
        config: sde,
        analytic,
        perturb_q: section.perturb_q,
        verification,
    };
    let v = &report.verification;
    let verdict = if v.pass { "pass" } else { "fail" };
    let csv = format!(
        "family,params,ks,threshold,samples,verdict\n{},{},{},{},{},{verdict}\n",
        v.spec.family(),
        v.spec
            .params()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        v.ks,
        v.threshold,
        v.sample_count
    );
    let md = format!(
        "| law | KS | threshold | samples | verdict |\n|---|---|---|---|---|\n| {} | {:.4} | {:.4} | {} | {verdict} |\n",
        v.spec, v.ks, v.threshold, v.sample_count
    );
    let dir = RunDir::create(&cfg.out, "sde-verify", &cfg.formats)?;
    dir.table("sde_verify", &report, &csv, &md)?;
    let mut text = String::from("value\n");
    for x in &samples {
        let _ = writeln!(text, "{x}");
    }
    dir.plotdata("samples.csv", &text)?;
    if let Some((lo, hi)) = plot_range(&samples) {
        dir.plotdata("histogram.csv", &histogram_csv(&samples, lo, hi))?;
        let mut curve = String::from("x,density\n");
        for (x, y) in plot_curve(&v.spec, lo, hi, 400)? {
            let _ = writeln!(curve, "{x},{y}");
        }
        dir.plotdata("pdf_curve.csv", &curve)?;
    }
    print_table(&dir, &md);
    Ok(())
}
