//! `volfit`: realized and implied variance distributions from price and
//! volatility-index CSV files.
//!
//! Every verb writes one directory under `--out` holding `tables/` and
//! `plotdata/`. Exit codes: 0 success, 2 configuration, 3 data,
//! 4 numerical failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Parser, Subcommand};
use volfit::volseries::WindowMode;
use volfit::Family;

use config::{config_error, ConfigError, Index, RunConfig, Target};

#[derive(Parser)]
#[command(
    name = "volfit",
    version,
    about = "Fit heavy-tailed laws to realized and implied variance"
)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output root; each verb writes a subdirectory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for fits and simulations.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Daily closes, `date,close`.
    #[arg(long, global = true)]
    prices: Option<PathBuf>,
    #[arg(long, global = true)]
    vix: Option<PathBuf>,
    #[arg(long, global = true)]
    vxo: Option<PathBuf>,
    /// Plain samples for `fit --target samples`.
    #[arg(long, global = true)]
    samples: Option<PathBuf>,
    /// First window-end date kept (inclusive).
    #[arg(long, global = true)]
    start: Option<NaiveDate>,
    /// Window-end dates from here on are dropped.
    #[arg(long, global = true)]
    end: Option<NaiveDate>,
    /// Window length in trading days.
    #[arg(short, long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<WindowMode>,
    /// Comma-separated families, e.g. `GB2,BP,Ga`.
    #[arg(long, global = true, value_delimiter = ',')]
    families: Option<Vec<Family>>,
    /// Simplex starts per fit.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Log returns and n-day realized variance.
    Rv,
    /// Fit every family to one series.
    Fit {
        #[arg(long, value_enum)]
        target: Option<Target>,
    },
    /// Fit the difference families to implied minus rescaled realized variance.
    Diff {
        #[arg(long, value_enum)]
        implied: Option<Index>,
        /// Compare index levels with RV instead of squares with RV².
        #[arg(long)]
        unsquared: bool,
    },
    /// Fits and tail regressions across window lengths.
    Sweep {
        #[arg(long, value_delimiter = ',')]
        n_values: Option<Vec<usize>>,
    },
    /// Autocorrelation of realized variance and its decay fit.
    Acf {
        #[arg(long)]
        max_lag: Option<usize>,
    },
    /// Simulate the volatility SDE and test its analytic steady state.
    SdeVerify {
        /// Scale the analytic q before comparing (negative control).
        #[arg(long)]
        perturb_q: Option<f64>,
    },
}

fn parse_mode(s: &str) -> Result<WindowMode, String> {
    match s {
        "rolling" => Ok(WindowMode::Rolling),
        "disjoint" => Ok(WindowMode::Disjoint),
        _ => Err(format!("unknown window mode '{s}', expected rolling or disjoint")),
    }
}

fn resolve(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = &cli.$field {
                cfg.$field = v.clone().into();
            }
        )*};
    }
    set!(prices, vix, vxo, samples, start, end, families, threads, out, seed, n, mode, restarts);
    match &cli.command {
        Command::Fit { target } => {
            if let Some(t) = target {
                cfg.fit.target = *t;
            }
        }
        Command::Diff { implied, unsquared } => {
            if let Some(i) = implied {
                cfg.diff.implied = *i;
            }
            if *unsquared {
                cfg.diff.squared = false;
            }
            if cli.families.is_some() {
                cfg.diff.families = cli.families.clone();
            }
        }
        Command::Sweep { n_values } => {
            if let Some(v) = n_values {
                cfg.sweep.n_values = v.clone();
            }
        }
        Command::Acf { max_lag } => {
            if let Some(m) = max_lag {
                cfg.acf.max_lag = *m;
            }
        }
        Command::SdeVerify { perturb_q } => {
            if let Some(f) = perturb_q {
                let sde = cfg
                    .sde
                    .as_mut()
                    .ok_or_else(|| config_error("sde-verify needs an [sde] section"))?;
                sde.perturb_q = Some(*f);
            }
        }
        Command::Rv => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let cfg = resolve(cli)?;
    if let Some(k) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| config_error(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Rv => commands::rv(&cfg),
        Command::Fit { .. } => commands::fit(&cfg),
        Command::Diff { .. } => commands::diff(&cfg),
        Command::Sweep { .. } => commands::sweep(&cfg),
        Command::Acf { .. } => commands::acf(&cfg),
        Command::SdeVerify { .. } => commands::sde_verify(&cfg),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<volfit::Error>() {
            return match e {
                volfit::Error::Domain(_) | volfit::Error::Unsupported(_) => 2,
                volfit::Error::Numerical(_) => 4,
                _ => 3,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
