use std::fmt;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::Deserialize;
use volfit::fitting::TailOptions;
use volfit::sdelab::SdeConfig;
use volfit::volseries::WindowMode;
use volfit::Family;

/// Invalid flags, config files or input paths.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Md,
}

/// Series a `fit` run is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Rv2,
    Rv,
    Vix2,
    Vix,
    Vxo2,
    Vxo,
    Samples,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Rv2 => "rv2",
            Target::Rv => "rv",
            Target::Vix2 => "vix2",
            Target::Vix => "vix",
            Target::Vxo2 => "vxo2",
            Target::Vxo => "vxo",
            Target::Samples => "samples",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Index {
    Vix,
    Vxo,
}

impl Index {
    pub fn name(self) -> &'static str {
        match self {
            Index::Vix => "vix",
            Index::Vxo => "vxo",
        }
    }
}

/// Whether an index enters a fit as every daily quote or one per month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    #[default]
    Daily,
    MonthEnd,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSection {
    pub target: Target,
    pub index_sampling: Sampling,
}

impl Default for FitSection {
    fn default() -> Self {
        Self {
            target: Target::Rv2,
            index_sampling: Sampling::Daily,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiffSection {
    pub implied: Index,
    /// Compare squared index levels with RV² rather than levels with RV.
    pub squared: bool,
    pub families: Option<Vec<Family>>,
}

impl Default for DiffSection {
    fn default() -> Self {
        Self {
            implied: Index::Vix,
            squared: true,
            families: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub n_values: Vec<usize>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            n_values: (1..=21).collect(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcfSection {
    pub max_lag: usize,
    /// Window length of the realized variance whose autocorrelation is taken.
    pub n: usize,
}

impl Default for AcfSection {
    fn default() -> Self {
        Self { max_lag: 250, n: 1 }
    }
}

/// Model parameters plus optional overrides of the default discretization.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdeSection {
    pub eta: f64,
    pub theta: f64,
    pub alpha: f64,
    pub kappa2: f64,
    pub kappa_alpha: f64,
    pub dt: Option<f64>,
    pub burn_in_steps: Option<usize>,
    pub sample_stride: Option<usize>,
    pub n_paths: Option<usize>,
    pub samples_per_path: Option<usize>,
    pub seed: Option<u64>,
    /// Scale the analytic `q` by this factor before comparing.
    pub perturb_q: Option<f64>,
}

impl SdeSection {
    pub fn to_config(&self, default_seed: u64) -> SdeConfig {
        let mut cfg = SdeConfig::new(self.eta, self.theta, self.alpha, self.kappa2, self.kappa_alpha);
        if let Some(dt) = self.dt {
            let scale = cfg.dt / dt;
            cfg.dt = dt;
            cfg.burn_in_steps = (cfg.burn_in_steps as f64 * scale).ceil() as usize;
            cfg.sample_stride = (cfg.sample_stride as f64 * scale).ceil() as usize;
        }
        if let Some(v) = self.burn_in_steps {
            cfg.burn_in_steps = v;
        }
        if let Some(v) = self.sample_stride {
            cfg.sample_stride = v;
        }
        if let Some(v) = self.n_paths {
            cfg.n_paths = v;
        }
        if let Some(v) = self.samples_per_path {
            cfg.samples_per_path = v;
        }
        cfg.seed = self.seed.unwrap_or(default_seed);
        cfg
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub prices: Option<PathBuf>,
    pub vix: Option<PathBuf>,
    pub vxo: Option<PathBuf>,
    /// One value per row, last column, with a header line.
    pub samples: Option<PathBuf>,
    pub start: Option<NaiveDate>,
    pub end: Option<NaiveDate>,
    pub n: usize,
    pub mode: WindowMode,
    pub families: Option<Vec<Family>>,
    pub restarts: usize,
    pub tail: TailOptions,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub fit: FitSection,
    pub diff: DiffSection,
    pub sweep: SweepSection,
    pub acf: AcfSection,
    pub sde: Option<SdeSection>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            prices: None,
            vix: None,
            vxo: None,
            samples: None,
            start: None,
            end: None,
            n: 21,
            mode: WindowMode::Rolling,
            families: None,
            restarts: 8,
            tail: TailOptions::default(),
            out: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json, Format::Md],
            seed: 0,
            threads: None,
            fit: FitSection::default(),
            diff: DiffSection::default(),
            sweep: SweepSection::default(),
            acf: AcfSection::default(),
            sde: None,
        }
    }
}

impl RunConfig {
    /// Parses a TOML file; relative paths inside it are taken from its directory.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.prices, &mut cfg.vix, &mut cfg.vxo, &mut cfg.samples]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if cfg.out.is_relative() {
            cfg.out = base.join(&cfg.out);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.n == 0 {
            return Err(config_error("n must be at least 1"));
        }
        if let (Some(s), Some(e)) = (self.start, self.end) {
            if s >= e {
                return Err(config_error(format!("empty date range [{s}, {e})")));
            }
        }
        if self.restarts == 0 {
            return Err(config_error("restarts must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(config_error("threads must be at least 1"));
        }
        if self.families.as_ref().is_some_and(|f| f.is_empty()) {
            return Err(config_error("family list is empty"));
        }
        if self.sweep.n_values.is_empty() || self.sweep.n_values.contains(&0) {
            return Err(config_error(
                "sweep n_values must be a non-empty list of positive lengths",
            ));
        }
        if self.acf.n == 0 {
            return Err(config_error("acf n must be at least 1"));
        }
        Ok(())
    }

    pub fn input(&self, name: &str) -> anyhow::Result<&Path> {
        let path = match name {
            "prices" => &self.prices,
            "vix" => &self.vix,
            "vxo" => &self.vxo,
            "samples" => &self.samples,
            _ => unreachable!("unknown input {name}"),
        };
        let path = path
            .as_deref()
            .ok_or_else(|| config_error(format!("no {name} input configured")))?;
        if !path.is_file() {
            return Err(config_error(format!("{name} input {} does not exist", path.display())));
        }
        Ok(path)
    }
}
