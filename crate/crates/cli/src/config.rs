//! Run configuration: built-in defaults, then an optional `key = value`
//! file, then command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use ogtt_core::classify::DEFAULT_SVM_C;
use ogtt_core::inference::{InferenceConfig, QUANTILE_LEVELS};
use ogtt_core::model::DEFAULT_STEP;

use crate::error::{CliError, Result};

pub const DEFAULT_BAND_DRAWS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub n_iter: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub step: f64,
    pub quantiles: Vec<u32>,
    pub c: f64,
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
    /// Posterior trajectories behind each glucose band.
    pub band_draws: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            out: PathBuf::from("out"),
            n_iter: 10_000,
            burn_in: 1_000,
            seed: 0,
            step: DEFAULT_STEP,
            quantiles: QUANTILE_LEVELS.to_vec(),
            c: DEFAULT_SVM_C,
            workers: None,
            band_draws: DEFAULT_BAND_DRAWS,
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Plain-text `key = value` configuration file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// MCMC iterations per patient, burn-in included.
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub burnin: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Integrator step in hours.
    #[arg(long)]
    pub step: Option<f64>,
    /// SVM regularization constant.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Comma-separated quantile levels for the classifier, e.g. `10,50,90`.
    #[arg(long)]
    pub quantiles: Option<String>,
    #[arg(long)]
    pub band_draws: Option<usize>,
}

/// Reads `key = value` lines. Blank lines and lines starting with `#` are
/// skipped; keys use the flag names with `-` or `_`.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Input {
                path: path.into(),
                message: format!("line {}: expected `key = value`", n + 1),
            });
        };
        map.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value `{value}` for `{key}`")))
}

fn parse_quantiles(value: &str) -> Result<Vec<u32>> {
    value
        .split(',')
        .map(|q| parse_value::<u32>("quantiles", q.trim()))
        .collect()
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &args.config {
            for (key, value) in read_config_file(path)? {
                cfg.set(&key, &value)?;
            }
        }
        if let Some(v) = &args.input {
            cfg.input = Some(v.clone());
        }
        if let Some(v) = &args.out {
            cfg.out = v.clone();
        }
        if let Some(v) = args.iters {
            cfg.n_iter = v;
        }
        if let Some(v) = args.burnin {
            cfg.burn_in = v;
        }
        if let Some(v) = args.seed {
            cfg.seed = v;
        }
        if let Some(v) = args.step {
            cfg.step = v;
        }
        if let Some(v) = args.c {
            cfg.c = v;
        }
        if let Some(v) = args.workers {
            cfg.workers = Some(v);
        }
        if let Some(v) = &args.quantiles {
            cfg.quantiles = parse_quantiles(v)?;
        }
        if let Some(v) = args.band_draws {
            cfg.band_draws = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "input" => self.input = Some(PathBuf::from(value)),
            "out" => self.out = PathBuf::from(value),
            "iters" => self.n_iter = parse_value(key, value)?,
            "burnin" => self.burn_in = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "step" => self.step = parse_value(key, value)?,
            "c" => self.c = parse_value(key, value)?,
            "workers" => self.workers = Some(parse_value(key, value)?),
            "quantiles" => self.quantiles = parse_quantiles(value)?,
            "band_draws" => self.band_draws = parse_value(key, value)?,
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.n_iter {
            return Err(CliError::Config(format!(
                "burn-in ({}) must be smaller than iters ({})",
                self.burn_in, self.n_iter
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(CliError::Config(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(CliError::Config(format!(
                "c must be positive, got {}",
                self.c
            )));
        }
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        if self.band_draws == 0 {
            return Err(CliError::Config("band-draws must be at least 1".into()));
        }
        if self.quantiles.is_empty() || self.quantiles.iter().any(|q| !QUANTILE_LEVELS.contains(q))
        {
            return Err(CliError::Config(format!(
                "quantiles must be a nonempty subset of {QUANTILE_LEVELS:?}"
            )));
        }
        Ok(())
    }

    pub fn inference(&self) -> InferenceConfig {
        InferenceConfig {
            n_iter: self.n_iter,
            burn_in: self.burn_in,
            seed: self.seed,
            step: self.step,
            ..InferenceConfig::default()
        }
    }

    pub fn input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Config("--input is required".into()))
    }

    /// Runs `f` on a thread pool sized by `workers`.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.workers {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}
