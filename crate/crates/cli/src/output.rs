use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use volfit::distributions::plot_curve;
use volfit::fitting::FitRow;

use crate::config::{config_error, Format};

const HIST_BINS: usize = 100;
const CURVE_POINTS: usize = 400;

/// `<out>/<run>/tables` and `<out>/<run>/plotdata` for one command run.
pub struct RunDir {
    root: PathBuf,
    formats: Vec<Format>,
}

impl RunDir {
    pub fn create(out: &Path, run: &str, formats: &[Format]) -> anyhow::Result<Self> {
        let root = out.join(run);
        for sub in ["tables", "plotdata"] {
            fs::create_dir_all(root.join(sub))
                .map_err(|e| config_error(format!("cannot create {}: {e}", root.join(sub).display())))?;
        }
        Ok(Self {
            root,
            formats: formats.to_vec(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn write(&self, rel: PathBuf, text: &str) -> anyhow::Result<()> {
        let path = self.root.join(rel);
        fs::write(&path, text).map_err(|e| config_error(format!("cannot write {}: {e}", path.display())))
    }

    pub fn plotdata(&self, name: &str, text: &str) -> anyhow::Result<()> {
        self.write(Path::new("plotdata").join(name), text)
    }

    /// A table always written as CSV regardless of the configured formats.
    pub fn table_csv(&self, name: &str, text: &str) -> anyhow::Result<()> {
        self.write(Path::new("tables").join(name), text)
    }

    /// Writes `<name>.json`, `.csv` and `.md` as configured.
    pub fn table<T: Serialize>(&self, name: &str, value: &T, csv: &str, md: &str) -> anyhow::Result<()> {
        for f in &self.formats {
            let (ext, text) = match f {
                Format::Json => ("json", serde_json::to_string_pretty(value)? + "\n"),
                Format::Csv => ("csv", csv.to_string()),
                Format::Md => ("md", md.to_string()),
            };
            self.write(Path::new("tables").join(format!("{name}.{ext}")), &text)?;
        }
        Ok(())
    }
}

/// Density histogram on equal bins over `[lo, hi]`, normalized by the full sample size.
pub fn histogram_csv(data: &[f64], lo: f64, hi: f64) -> String {
    let width = (hi - lo) / HIST_BINS as f64;
    let mut counts = vec![0usize; HIST_BINS];
    for &x in data {
        if x >= lo && x <= hi {
            let k = (((x - lo) / width) as usize).min(HIST_BINS - 1);
            counts[k] += 1;
        }
    }
    let mut out = String::from("bin_lo,bin_hi,density\n");
    for (k, c) in counts.iter().enumerate() {
        let a = lo + width * k as f64;
        let density = *c as f64 / (data.len() as f64 * width);
        let _ = writeln!(out, "{a},{},{density}", a + width);
    }
    out
}

/// Fitted densities of every successful row on a common grid.
pub fn curves_csv(rows: &[FitRow], lo: f64, hi: f64) -> String {
    let fitted: Vec<(&FitRow, Vec<(f64, f64)>)> = rows
        .iter()
        .filter_map(|r| {
            let fit = r.fit.as_ref()?;
            plot_curve(&fit.spec, lo, hi, CURVE_POINTS).ok().map(|c| (r, c))
        })
        .collect();
    let mut out = String::from("x");
    for (r, _) in &fitted {
        let _ = write!(out, ",{}", r.family);
    }
    out.push('\n');
    for i in 0..CURVE_POINTS {
        let x = fitted
            .first()
            .map(|(_, c)| c[i].0)
            .unwrap_or(lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64);
        let _ = write!(out, "{x}");
        for (_, c) in &fitted {
            let _ = write!(out, ",{}", c[i].1);
        }
        out.push('\n');
    }
    out
}

/// Linear-interpolated sample quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    match sorted.get(i + 1) {
        Some(next) => sorted[i] + (pos - i as f64) * (next - sorted[i]),
        None => sorted[i],
    }
}

/// Plot range covering the bulk of a sample: from the minimum (positive
/// data) or the 0.5% quantile up to the 99.5% quantile.
pub fn plot_range(data: &[f64]) -> Option<(f64, f64)> {
    let mut sorted: Vec<f64> = data.iter().copied().filter(|x| x.is_finite()).collect();
    if sorted.len() < 2 {
        return None;
    }
    sorted.sort_by(f64::total_cmp);
    let lo = if sorted[0] > 0.0 {
        sorted[0]
    } else {
        quantile(&sorted, 0.005)
    };
    let hi = quantile(&sorted, 0.995);
    (hi > lo).then_some((lo, hi))
}
