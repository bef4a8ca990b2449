//! JSON form of a posterior summary.

use std::collections::BTreeMap;
use std::path::Path;

use ogtt_core::inference::{PosteriorSummary, QUANTILE_LEVELS};
use ogtt_core::model::ParamVector;
use ogtt_core::Category;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::format;

pub const SUMMARY_SUFFIX: &str = ".summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NamedParams {
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub gb: f64,
    pub theta3: f64,
}

impl From<ParamVector> for NamedParams {
    fn from(v: ParamVector) -> Self {
        let v = v.map(format::round);
        Self {
            theta0: v[0],
            theta1: v[1],
            theta2: v[2],
            gb: v[3],
            theta3: v[4],
        }
    }
}

impl From<NamedParams> for ParamVector {
    fn from(p: NamedParams) -> Self {
        [p.theta0, p.theta1, p.theta2, p.gb, p.theta3]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryFile {
    pub id: String,
    pub category: Category,
    pub map: NamedParams,
    pub map_logpost: f64,
    pub cm: NamedParams,
    pub median: NamedParams,
    pub std: NamedParams,
    /// `q10` through `q90`.
    #[serde(flatten)]
    pub quantiles: BTreeMap<String, NamedParams>,
    pub iat: f64,
    pub iat_per_param: f64,
    pub rmse_map: f64,
    pub n_iter: usize,
    pub burn_in: usize,
    /// Seed of this patient's chain.
    pub seed: u64,
}

impl SummaryFile {
    pub fn new(
        id: &str,
        category: Category,
        s: &PosteriorSummary,
        n_iter: usize,
        burn_in: usize,
        seed: u64,
    ) -> Self {
        let quantiles = QUANTILE_LEVELS
            .iter()
            .zip(&s.quantiles)
            .map(|(q, v)| (format!("q{q}"), NamedParams::from(*v)))
            .collect();
        Self {
            id: id.to_string(),
            category,
            map: s.map.into(),
            map_logpost: format::round(s.map_logpost),
            cm: s.cm.into(),
            median: s.median.into(),
            std: s.std.into(),
            quantiles,
            iat: format::round(s.iat),
            iat_per_param: format::round(s.iat_per_param),
            rmse_map: format::round(s.rmse_at_map),
            n_iter,
            burn_in,
            seed,
        }
    }

    pub fn to_summary(&self) -> Result<PosteriorSummary> {
        let quantiles = QUANTILE_LEVELS
            .iter()
            .map(|q| {
                self.quantiles
                    .get(&format!("q{q}"))
                    .map(|p| ParamVector::from(*p))
                    .ok_or_else(|| {
                        CliError::Config(format!("summary for `{}` lacks quantile q{q}", self.id))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PosteriorSummary {
            map: self.map.into(),
            map_logpost: self.map_logpost,
            cm: self.cm.into(),
            median: self.median.into(),
            std: self.std.into(),
            quantiles,
            iat: self.iat,
            iat_per_param: self.iat_per_param,
            rmse_at_map: self.rmse_map,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("summary serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(CliError::io(path))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input {
            path: path.into(),
            message: e.to_string(),
        })
    }
}

/// Every `*.summary.json` in `dir`, ordered by patient id.
pub fn read_summaries(dir: &Path) -> Result<Vec<SummaryFile>> {
    let entries = std::fs::read_dir(dir).map_err(CliError::io(dir))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(CliError::io(dir))?.path();
        let is_summary = path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.ends_with(SUMMARY_SUFFIX));
        if is_summary {
            out.push(SummaryFile::read(&path)?);
        }
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}
