//! End-to-end acceptance checks, one test per criterion.
//!
//! Each test prints a single `[acceptance N] PASS|FAIL|SKIP` line. Criteria
//! that need market data read `sp500.csv`, `vix.csv` and `vxo.csv` from the
//! directory named by `VOLFIT_DATA_DIR` and are skipped when it is unset.

#![allow(clippy::excessive_precision)]

mod common;

use std::f64::consts::PI;
use std::fs::File;
use std::path::Path;

use chrono::NaiveDate;
use common::{data_dir, report, row, spec, verdict, Verdict, TABLE_ROWS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use volfit::fitting::{
    correlation_from_difference, ks_band, ks_statistic, mle_fit, mle_fit_with, n_sweep, pearson, population_std,
    FitResult, MleOptions, SweepOptions,
};
use volfit::quad::{gauss_kronrod, whole_line, QuadratureConfig};
use volfit::sdelab::{verify_steady_state, SdeConfig};
use volfit::specfun::tricomi_u;
use volfit::volseries::{
    implied_minus_realized, log_returns, read_dated_csv, read_prices_csv, realized_variance, DatedSeries, PriceSeries,
    ReturnSeries, VarianceSeries, WindowMode,
};
use volfit::{DistributionSpec, Family};

const MASS_CFG: QuadratureConfig = QuadratureConfig {
    rel_tol: 1e-10,
    abs_tol: 1e-13,
    max_subdivisions: 2000,
};

fn scale_index(family: Family) -> usize {
    match family {
        Family::GB2 => 3,
        Family::BP => 2,
        _ => 1,
    }
}

/// `∫ pdf` over the support, in `ln x` for positive families and in
/// `asinh((x - centre)/width)` on the real line.
fn total_mass(spec: &DistributionSpec) -> f64 {
    let p = spec.params();
    let fam = spec.family();
    if fam.positive_support() {
        let scale = p[scale_index(fam)];
        let g = |u: f64| {
            let x = scale * u.exp();
            (spec.log_pdf(x) + u).exp() * scale
        };
        whole_line(g, 0.0, &MASS_CFG).value
    } else {
        let (centre, width) = match fam {
            Family::N | Family::GST => (p[0], p[1]),
            Family::GCHU => (p[3], p[2]),
            _ => (p[3], p[2]),
        };
        let g = |s: f64| spec.pdf(centre + width * s.sinh()) * width * s.cosh();
        gauss_kronrod(g, -80.0, 80.0, &MASS_CFG).value
    }
}

#[test]
fn criterion_1_normalization() {
    let mut worst = (0.0f64, String::new());
    let mut failures = Vec::new();
    for (table, family, params) in TABLE_ROWS {
        let s = spec(*family, params);
        let err = (total_mass(&s) - 1.0).abs();
        let tol = if matches!(family, Family::S | Family::GCHU) {
            1e-4
        } else {
            1e-6
        };
        if err > tol {
            failures.push(format!("{table} {s}: {err:.2e}"));
        }
        if err > worst.0 {
            worst = (err, format!("{table} {s}"));
        }
    }
    let pass = failures.is_empty();
    report(
        1,
        "normalization",
        verdict(pass),
        &format!(
            "{} rows, worst |mass-1| = {:.2e} ({}){}",
            TABLE_ROWS.len(),
            worst.0,
            worst.1,
            if pass {
                String::new()
            } else {
                format!("; failing: {}", failures.join(", "))
            }
        ),
    );
    assert!(pass, "{failures:?}");
}

fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

#[test]
fn criterion_2_closed_form_oracles() {
    let mut checks: Vec<(String, f64)> = Vec::new();
    let mut worst = |name: &str, errs: Vec<f64>| {
        checks.push((name.to_string(), errs.into_iter().fold(0.0, f64::max)));
    };

    let (g, d) = (1.7, -0.4);
    let s2 = spec(Family::S, &[2.0, 0.3, g, d]);
    let sd = 2f64.sqrt() * g;
    let errs = (-10..=10)
        .map(|k| {
            let x = d + 0.5 * k as f64 * sd;
            let z = (x - d) / sd;
            rel_err(s2.pdf(x), (-0.5 * z * z).exp() / (sd * (2.0 * PI).sqrt()))
        })
        .collect();
    worst("stable alpha=2 vs normal pdf", errs);

    let (g, d) = (2.0, 1.0);
    let s1 = spec(Family::S, &[1.0, 0.0, g, d]);
    let xs = [-40.0, -3.0, 0.0, 0.5, 1.0, 2.2, 7.0, 100.0];
    let errs = xs
        .iter()
        .map(|&x| {
            let z = (x - d) / g;
            rel_err(s1.pdf(x), 1.0 / (PI * g * (1.0 + z * z)))
        })
        .collect();
    worst("stable alpha=1 vs Cauchy pdf", errs);
    let errs = xs
        .iter()
        .map(|&x| rel_err(s1.cdf(x).unwrap(), 0.5 + ((x - d) / g).atan() / PI))
        .collect();
    worst("stable alpha=1 vs Cauchy cdf", errs);

    // S0 with alpha = 1/2, beta = 1 is Levy located at delta - gamma
    let (g, d) = (1.3, 0.7);
    let lv = spec(Family::S, &[0.5, 1.0, g, d]);
    let loc = d - g;
    let errs = [0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0]
        .iter()
        .map(|&t| {
            let y = t * g;
            let want = (g / (2.0 * PI)).sqrt() * (-g / (2.0 * y)).exp() / y.powf(1.5);
            rel_err(lv.pdf(loc + y), want)
        })
        .collect();
    worst("stable alpha=0.5 beta=1 vs Levy pdf", errs);

    let e = |x: f64| (-x).exp();
    let mut errs = Vec::new();
    for x in [0.1, 0.5, 1.0, 3.0, 10.0] {
        errs.push(rel_err(spec(Family::Ga, &[1.0, 1.0]).cdf(x).unwrap(), 1.0 - e(x)));
        let y = x / 2.5;
        errs.push(rel_err(
            spec(Family::Ga, &[2.0, 2.5]).cdf(x).unwrap(),
            1.0 - (1.0 + y) * e(y),
        ));
        errs.push(rel_err(spec(Family::IGa, &[1.0, 1.7]).cdf(x).unwrap(), e(1.7 / x)));
        errs.push(rel_err(
            spec(Family::BP, &[1.0, 1.0, 2.0]).cdf(x).unwrap(),
            x / (x + 2.0),
        ));
        errs.push(rel_err(
            spec(Family::BP, &[1.0, 3.0, 1.0]).cdf(x).unwrap(),
            1.0 - (1.0 + x).powi(-3),
        ));
        errs.push(rel_err(
            spec(Family::BP, &[2.0, 1.0, 1.0]).cdf(x).unwrap(),
            (x / (1.0 + x)).powi(2),
        ));
    }
    worst("Ga/IGa/BP elementary cdfs", errs);

    // U(1/2, 1/2, z) = sqrt(pi) e^z erfc(sqrt z), U(1, 1, z) = e^z E1(z)
    let oracle = [
        (0.01, 1.5889286263174076, 4.0785114434564258),
        (0.1, 1.2825093897118496, 2.0146425447084516),
        (1.0, 0.75787215614131211, 0.59634736232319407),
        (5.0, 0.41178763513417405, 0.1704221762847322),
        (30.0, 0.17967204003104712, 0.032289738758980125),
    ];
    let cfg = QuadratureConfig::default();
    let errs = oracle
        .iter()
        .flat_map(|&(z, half, one)| {
            [
                rel_err(tricomi_u(0.5, 0.5, z, &cfg).unwrap(), half),
                rel_err(tricomi_u(1.0, 1.0, z, &cfg).unwrap(), one),
            ]
        })
        .collect();
    worst("Tricomi U vs erfc / E1", errs);

    let pass = checks.iter().all(|(_, e)| *e <= 1e-6);
    let detail = checks
        .iter()
        .map(|(n, e)| format!("{n} {e:.1e}"))
        .collect::<Vec<_>>()
        .join("; ");
    report(2, "closed-form oracles", verdict(pass), &detail);
    assert!(pass, "{checks:?}");
}

/// Exponent compared in the recovery test: the tail exponent where the
/// family has one, else the front exponent; `-(ν+1)` for GST.
fn tracked_exponent(spec: &DistributionSpec) -> f64 {
    if spec.family() == Family::GST {
        return -(spec.params()[2] + 1.0);
    }
    let e = spec.exponents().unwrap();
    e.tail_exponent.or(e.front_exponent).unwrap()
}

const RECOVERY_SEEDS: u64 = 20;
const RECOVERY_SIZE: usize = 100_000;

fn recovery(family: Family, truth: DistributionSpec) {
    let want = tracked_exponent(&truth);
    let band = ks_band(RECOVERY_SIZE);
    let mut within = 0;
    let mut ks_fail = Vec::new();
    let mut worst_dev: f64 = 0.0;
    for seed in 0..RECOVERY_SEEDS {
        let data = truth.sample(RECOVERY_SIZE, 1000 + seed);
        let opts = MleOptions {
            restarts: 2,
            seed,
            ..MleOptions::default()
        };
        let fit = mle_fit_with(&data, family, None, &opts).unwrap();
        let dev = ((tracked_exponent(&fit.spec) - want) / want).abs();
        worst_dev = worst_dev.max(dev);
        if dev <= 0.05 {
            within += 1;
        }
        if fit.ks > band {
            ks_fail.push(format!("seed {seed}: {:.4}", fit.ks));
        }
    }
    let pass = within >= 18 && ks_fail.is_empty();
    report(
        3,
        &format!("MLE recovery {family}"),
        verdict(pass),
        &format!(
            "exponent {want:.4} within 5% in {within}/{RECOVERY_SEEDS} seeds (worst {:.1}%), KS <= {band:.4} in {}/{RECOVERY_SEEDS}",
            100.0 * worst_dev,
            RECOVERY_SEEDS as usize - ks_fail.len()
        ),
    );
    assert!(pass, "{family}: {within}/20 within 5%, KS failures {ks_fail:?}");
}

#[test]
fn criterion_3_recovery_ga() {
    recovery(Family::Ga, row("rv2-7017", Family::Ga));
}

#[test]
fn criterion_3_recovery_iga() {
    recovery(Family::IGa, row("rv2-7017", Family::IGa));
}

#[test]
fn criterion_3_recovery_gga() {
    recovery(Family::GGa, row("rv2-7017", Family::GGa));
}

#[test]
fn criterion_3_recovery_giga() {
    recovery(Family::GIGa, row("rv2-7017", Family::GIGa));
}

#[test]
fn criterion_3_recovery_bp() {
    recovery(Family::BP, row("rv2-7017", Family::BP));
}

#[test]
fn criterion_3_recovery_gb2() {
    recovery(Family::GB2, row("rv2-7017", Family::GB2));
}

#[test]
fn criterion_3_recovery_gst() {
    recovery(Family::GST, row("vix2-rv2", Family::GST));
}

#[test]
fn criterion_3_recovery_stable() {
    recovery(Family::S, row("vix2-rv2", Family::S));
}

#[test]
fn criterion_4_sde_steady_state() {
    let cases = [
        ("Heston", SdeConfig::new(1.0, 1.0, 1.0, 0.0, 1.0), Family::Ga),
        ("multiplicative", SdeConfig::new(1.0, 1.5, 1.0, 1.0, 0.0), Family::IGa),
        ("combined", SdeConfig::new(0.5, 2.0, 1.0, 1.0, 1.0), Family::BP),
        ("general", SdeConfig::new(1.0, 1.0, 0.5, 0.5, 0.5), Family::GB2),
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, cfg, family) in cases {
        let v = verify_steady_state(&cfg).unwrap();
        let ok = v.spec.family() == family && v.ks <= 0.02 && v.sample_count >= 10_000;
        pass &= ok;
        lines.push(format!("{name} {} KS {:.4} (n={})", v.spec, v.ks, v.sample_count));
    }
    report(4, "SDE steady state", verdict(pass), &lines.join("; "));
    assert!(pass, "{lines:?}");
}

#[test]
fn criterion_5_power_transform() {
    let n = 100_000;
    let band = ks_band(n);
    let mut lines = Vec::new();
    let mut pass = true;
    for (i, base) in [row("rv2-7017", Family::GB2), row("rv-7017", Family::GIGa)]
        .into_iter()
        .enumerate()
    {
        let squared: Vec<f64> = base.sample(n, 77 + i as u64).iter().map(|x| x * x).collect();
        let ks = ks_statistic(&squared, &base.power_transform(2.0).unwrap()).unwrap();
        pass &= ks <= band;
        lines.push(format!("{} squared KS {ks:.4}", base.family()));
    }
    for family in [Family::GB2, Family::GIGa] {
        let moved = row("rv-7017", family).power_transform(2.0).unwrap();
        let target = row("rv2-7017", family);
        let dev = moved
            .params()
            .iter()
            .zip(target.params())
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max);
        pass &= dev <= 0.05;
        lines.push(format!("{moved} vs {target}: max deviation {:.2}%", 100.0 * dev));
    }
    report(
        5,
        "power transform",
        verdict(pass),
        &format!("band {band:.4}; {}", lines.join("; ")),
    );
    assert!(pass, "{lines:?}");
}

struct MarketData {
    returns: ReturnSeries,
    vix: DatedSeries,
    vxo: DatedSeries,
}

fn load_market(dir: &Path) -> MarketData {
    let prices: PriceSeries = read_prices_csv(File::open(dir.join("sp500.csv")).unwrap()).unwrap();
    MarketData {
        returns: log_returns(&prices).unwrap(),
        vix: read_dated_csv(File::open(dir.join("vix.csv")).unwrap()).unwrap(),
        vxo: read_dated_csv(File::open(dir.join("vxo.csv")).unwrap()).unwrap(),
    }
}

fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn returns_between(r: &ReturnSeries, start: NaiveDate, end: NaiveDate) -> ReturnSeries {
    let keep: Vec<usize> = (0..r.len())
        .filter(|&i| r.dates[i] >= start && r.dates[i] < end)
        .collect();
    ReturnSeries {
        dates: keep.iter().map(|&i| r.dates[i]).collect(),
        prior_dates: keep.iter().map(|&i| r.prior_dates[i]).collect(),
        values: keep.iter().map(|&i| r.values[i]).collect(),
    }
}

fn fit_all(data: &[f64], families: &[Family]) -> Vec<(Family, FitResult)> {
    families
        .iter()
        .map(|&f| (f, mle_fit(data, f, None, 8).unwrap()))
        .collect()
}

fn ks_of(fits: &[(Family, FitResult)], family: Family) -> f64 {
    fits.iter().find(|(f, _)| *f == family).unwrap().1.ks
}

fn summary(fits: &[(Family, FitResult)]) -> String {
    fits.iter()
        .map(|(f, r)| format!("{f} {:.4}", r.ks))
        .collect::<Vec<_>>()
        .join(", ")
}

#[test]
fn criterion_6_published_tables() {
    let Some(dir) = data_dir() else {
        report(
            6,
            "published tables",
            Verdict::Skip,
            "VOLFIT_DATA_DIR with sp500.csv, vix.csv, vxo.csv not set",
        );
        return;
    };
    let data = load_market(&dir);
    let (start70, start90, end) = (ymd(1970, 1, 2), ymd(1990, 1, 31), ymd(2017, 12, 30));
    let rv = realized_variance(&data.returns, 21, WindowMode::Rolling).unwrap();
    let mut lines = Vec::new();
    let mut pass = true;

    let vix = data.vix.between(Some(start90), Some(end));
    let vxo = data.vxo.between(Some(start90), Some(end));
    let vix_diff = implied_minus_realized(&vix, &rv, true).unwrap();
    let vxo_diff = implied_minus_realized(&vxo, &rv, true).unwrap();
    let ok = (vix_diff.ratio - 1.4075).abs() <= 0.02 && (vxo_diff.ratio - 1.4908).abs() <= 0.02;
    pass &= ok;
    lines.push(format!("ratios {:.4} / {:.4}", vix_diff.ratio, vxo_diff.ratio));

    for mode in [WindowMode::Rolling, WindowMode::Disjoint] {
        let series: VarianceSeries = realized_variance(&data.returns, 21, mode)
            .unwrap()
            .between(Some(start70), Some(end));
        let fits = fit_all(&series.values, &Family::VARIANCE);
        let k = |f| ks_of(&fits, f);
        let ordered = k(Family::GB2) <= k(Family::BP)
            && k(Family::BP) <= k(Family::GIGa)
            && k(Family::GIGa) < k(Family::IGa)
            && k(Family::IGa) < k(Family::GGa)
            && k(Family::GGa) < k(Family::Ga);
        let ok = (k(Family::GB2) - 0.0115).abs() <= 0.005 && ordered;
        // the rolling windows are the contract; disjoint windows are reported only
        if mode == WindowMode::Rolling {
            pass &= ok;
        }
        lines.push(format!("RV² {mode:?} [{}] ordered={ordered}", summary(&fits)));
    }

    let diff_fams = [Family::N, Family::GST, Family::GCHU, Family::S];
    let fits = fit_all(&vix_diff.values, &diff_fams);
    let k = |f| ks_of(&fits, f);
    let heavy = [k(Family::GST), k(Family::GCHU), k(Family::S)];
    let ok = k(Family::GCHU) <= k(Family::S).min(k(Family::GST)) + 0.005
        && (k(Family::S) - k(Family::GST)).abs() <= 0.01
        && heavy.iter().all(|v| *v <= 0.5 * k(Family::N));
    pass &= ok;
    lines.push(format!("VIX²-RV² [{}]", summary(&fits)));

    let level = implied_minus_realized(&vix, &rv, false).unwrap();
    let fits = fit_all(&level.values, &diff_fams);
    let k = |f| ks_of(&fits, f);
    let others = [k(Family::N), k(Family::GST), k(Family::GCHU)];
    let ok = k(Family::S) <= 0.0135 + 0.005 && others.iter().all(|v| *v >= 0.034 && *v > k(Family::S));
    pass &= ok;
    lines.push(format!("VIX-RV [{}]", summary(&fits)));

    report(6, "published tables", verdict(pass), &lines.join("; "));
    assert!(pass, "{lines:?}");
}

#[test]
fn criterion_7_correlation_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let rho: f64 = rng.random_range(-0.99..0.99);
        let n = rng.random_range(50..2000);
        let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            let x: f64 = rng.sample(StandardNormal);
            let e: f64 = rng.sample(StandardNormal);
            a.push(3.0 * x + 1.0);
            b.push(0.5 * (rho * x + (1.0 - rho * rho).sqrt() * e) - 2.0);
        }
        worst = worst.max(identity_gap(&a, &b));
    }
    let mut pass = worst <= 1e-12;
    let mut detail = format!("random pairs max |rho_diff - rho_pearson| = {worst:.1e}");

    let (source, implied, realized) = match data_dir() {
        Some(dir) => {
            let data = load_market(&dir);
            let rv = realized_variance(&data.returns, 21, WindowMode::Rolling).unwrap();
            let vix = data.vix.between(Some(ymd(1990, 1, 31)), Some(ymd(2017, 12, 30)));
            let d = implied_minus_realized(&vix, &rv, true).unwrap();
            (
                "VIX² vs scaled RV²",
                d.pairs.implied.clone(),
                scaled(&d.pairs.realized, d.ratio),
            )
        }
        None => {
            let (prices, iv) = synthetic_market(4000, 11);
            let rv = realized_variance(&log_returns(&prices).unwrap(), 21, WindowMode::Rolling).unwrap();
            let d = implied_minus_realized(&iv, &rv, true).unwrap();
            (
                "synthetic index² vs scaled RV²",
                d.pairs.implied.clone(),
                scaled(&d.pairs.realized, d.ratio),
            )
        }
    };
    let gap = identity_gap(&implied, &realized);
    pass &= gap <= 1e-12;
    detail.push_str(&format!("; pipeline ({source}, {} pairs) gap {gap:.1e}", implied.len()));
    report(7, "correlation identity", verdict(pass), &detail);
    assert!(pass, "{detail}");
}

fn scaled(values: &[f64], ratio: f64) -> Vec<f64> {
    values.iter().map(|v| ratio * v).collect()
}

fn identity_gap(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let sa = population_std(a).unwrap();
    let sb = population_std(b).unwrap();
    let sd = population_std(&diff).unwrap();
    let rho = correlation_from_difference(sa, sb, sd).unwrap().rho;
    (rho - pearson(a, b).unwrap()).abs()
}

/// Prices with persistent stochastic volatility and a noisy index that tracks
/// the volatility level, on consecutive weekdays.
fn synthetic_market(days: usize, seed: u64) -> (PriceSeries, DatedSeries) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dates = Vec::with_capacity(days);
    let mut d = ymd(2000, 1, 3);
    while dates.len() < days {
        use chrono::Datelike;
        if d.weekday().number_from_monday() <= 5 {
            dates.push(d);
        }
        d = d.succ_opt().unwrap();
    }
    let mut log_vol: f64 = (0.16f64).ln();
    let mut price = 1000.0;
    let (mut closes, mut index) = (Vec::new(), Vec::new());
    for _ in 0..days {
        let z: f64 = rng.sample(StandardNormal);
        log_vol += 0.02 * ((0.16f64).ln() - log_vol) + 0.08 * z;
        let vol = log_vol.exp();
        let e: f64 = rng.sample(StandardNormal);
        let noise: f64 = rng.sample(StandardNormal);
        closes.push(price);
        index.push(100.0 * vol * (1.0 + 0.1 * noise).abs());
        price *= (vol / 252f64.sqrt() * e).exp();
    }
    (
        PriceSeries::new(dates.clone(), closes).unwrap(),
        DatedSeries::new(dates, index).unwrap(),
    )
}

#[test]
fn criterion_8_n_sweep() {
    let Some(dir) = data_dir() else {
        report(
            8,
            "n-sweep",
            Verdict::Skip,
            "VOLFIT_DATA_DIR with sp500.csv, vix.csv, vxo.csv not set",
        );
        return;
    };
    let data = load_market(&dir);
    let returns = returns_between(&data.returns, ymd(1970, 1, 2), ymd(2017, 12, 30));
    let families = [Family::GB2, Family::BP, Family::GGa];
    let sweep = n_sweep(&returns, &[1, 7, 21], &families, &SweepOptions::default()).unwrap();
    let exps = |n: usize, f: Family| {
        let e = sweep.get(n, f).and_then(|e| e.fit.as_ref()).and_then(|r| r.exponents);
        let e = e.unwrap_or_else(|| panic!("no fit for {f} at n={n}"));
        (e.front_exponent, e.tail_exponent)
    };
    let daily_negative = families.iter().all(|&f| exps(1, f).0.is_some_and(|v| v < 0.0));
    let monthly_front = exps(21, Family::GB2).0.unwrap();
    let (t7, t21) = (exps(7, Family::GB2).1.unwrap(), exps(21, Family::GB2).1.unwrap());
    let drift = ((t21 - t7) / t7).abs();
    let pass = daily_negative && monthly_front > 5.0 && drift < 0.1;
    let detail = format!(
        "n=1 fronts {:?}; n=21 GB2 front {monthly_front:.3}; GB2 tail {t7:.3} -> {t21:.3} ({:.1}%)",
        families.iter().map(|&f| exps(1, f).0.unwrap()).collect::<Vec<_>>(),
        100.0 * drift
    );
    report(8, "n-sweep", verdict(pass), &detail);
    assert!(pass, "{detail}");
}
