use std::path::Path;

use ogtt_core::classify::{
    insulin_scores, predict, quantile_ensemble_at, Class, ClassifierModel, Estimate, Prediction,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::format;
use crate::summary::{read_summaries, SummaryFile};

pub const REPORT_FILE: &str = "classification.csv";
pub const MODEL_FILE: &str = "hyperplanes.json";

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedPatient {
    pub summary: SummaryFile,
    /// `(1/θ1, 1/θ3)` at the MAP.
    pub scores: [f64; 2],
    pub prediction: Prediction,
}

impl ClassifiedPatient {
    /// Impaired by its OGTT category but on the healthy side of the ensemble.
    pub fn possible_misclassification(&self) -> bool {
        self.summary.category.class() == Class::Impaired && self.prediction.class == Class::Healthy
    }
}

pub fn classify_summaries(
    summaries: Vec<SummaryFile>,
    c: f64,
    levels: &[u32],
) -> Result<(ClassifierModel, Vec<ClassifiedPatient>)> {
    let posterior = summaries
        .iter()
        .map(|s| s.to_summary())
        .collect::<Result<Vec<_>>>()?;
    let categories: Vec<_> = summaries.iter().map(|s| s.category).collect();
    let model = quantile_ensemble_at(&posterior, &categories, c, levels)?;
    let patients = summaries
        .into_iter()
        .zip(&posterior)
        .map(|(summary, p)| {
            Ok(ClassifiedPatient {
                scores: insulin_scores(p, Estimate::Map)?,
                prediction: predict(&model, p)?,
                summary,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((model, patients))
}

pub fn report_csv(model: &ClassifierModel, patients: &[ClassifiedPatient]) -> String {
    let mut text = String::from(
        "id,category,inv_theta1,inv_theta3,predicted,transition,possible_misclassification",
    );
    for h in &model.hyperplanes {
        text.push_str(&format!(",margin_q{}", h.quantile));
    }
    text.push('\n');
    for p in patients {
        text.push_str(&format!(
            "{},{},{},{},{},{}",
            p.summary.id,
            p.summary.category,
            format::row(p.scores),
            p.prediction.class,
            p.prediction.transition,
            p.possible_misclassification()
        ));
        for m in &p.prediction.margins {
            text.push(',');
            text.push_str(&format::num(*m));
        }
        text.push('\n');
    }
    text
}

fn model_json(model: &ClassifierModel) -> String {
    let mut rounded = model.clone();
    for h in &mut rounded.hyperplanes {
        h.w = h.w.map(format::round);
        h.b = format::round(h.b);
    }
    let mut text = serde_json::to_string_pretty(&rounded).expect("model serializes");
    text.push('\n');
    text
}

/// Trains the ensemble on the summaries in `--input` and writes the report
/// and hyperplanes to `--out`.
pub fn run_classify(cfg: &RunConfig) -> Result<Vec<ClassifiedPatient>> {
    let input = cfg.input()?;
    let summaries = read_summaries(input)?;
    if summaries.is_empty() {
        return Err(CliError::Input {
            path: input.into(),
            message: "no *.summary.json files found".into(),
        });
    }
    let (model, patients) = classify_summaries(summaries, cfg.c, &cfg.quantiles)?;
    let out: &Path = &cfg.out;
    std::fs::create_dir_all(out).map_err(CliError::io(out))?;
    let write = |name: &str, text: String| {
        let path = out.join(name);
        std::fs::write(&path, text).map_err(CliError::io(&path))
    };
    write(REPORT_FILE, report_csv(&model, &patients))?;
    write(MODEL_FILE, model_json(&model))?;
    Ok(patients)
}
