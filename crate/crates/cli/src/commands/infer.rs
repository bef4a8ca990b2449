use std::path::{Path, PathBuf};

use ogtt_core::inference::{infer_patient, patient_seed, quantile_sorted, PosteriorChain};
use ogtt_core::model::{observe, simulate, ModelParams, PARAM_NAMES};
use ogtt_core::{PatientRecord, PosteriorSummary};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::format;
use crate::patients::parse_patients;
use crate::summary::{SummaryFile, SUMMARY_SUFFIX};

pub const CHAIN_SUFFIX: &str = ".chain.csv";
pub const BAND_SUFFIX: &str = ".band.csv";
/// Spacing of the band rows, hours.
pub const BAND_SPACING: f64 = 0.05;
const BAND_END: f64 = 2.0;
const BAND_LEVELS: [f64; 4] = [0.025, 0.25, 0.75, 0.975];

#[derive(Debug)]
pub struct InferOutcome {
    pub id: String,
    pub result: Result<PathBuf>,
}

pub fn chain_csv(chain: &PosteriorChain) -> String {
    let mut text = format!("iter,{},logpost\n", PARAM_NAMES.join(","));
    for (k, (s, lp)) in chain.samples.iter().zip(&chain.logpost).enumerate() {
        text.push_str(&format!(
            "{},{},{}\n",
            k + 1,
            format::row(*s),
            format::num(*lp)
        ));
    }
    text
}

/// Pointwise glucose quantiles over `draws` posterior trajectories taken
/// at evenly spaced post-burn-in iterations, with the MAP trajectory.
pub fn band_csv(
    chain: &PosteriorChain,
    summary: &PosteriorSummary,
    g0: f64,
    step: f64,
    draws: usize,
) -> Result<String> {
    let rows = (BAND_END / BAND_SPACING).round() as usize;
    let times: Vec<f64> = (0..=rows).map(|k| k as f64 * BAND_SPACING).collect();
    let curve = |theta| -> Result<Vec<f64>> {
        let traj = simulate(&ModelParams::from_vector(theta), g0, BAND_END, step)?;
        Ok(observe(&traj, &times)?)
    };
    let (kept, _) = chain.kept();
    let draws = draws.min(kept.len());
    let curves = (0..draws)
        .map(|k| curve(&kept[k * kept.len() / draws]))
        .collect::<Result<Vec<_>>>()?;
    let map_curve = curve(&summary.map)?;

    let mut text = String::from("t,q025,q25,median,q75,q975,map_traj\n");
    let mut column = Vec::with_capacity(draws);
    for (i, t) in times.iter().enumerate() {
        column.clear();
        column.extend(curves.iter().map(|c| c[i]));
        column.sort_by(f64::total_cmp);
        let q = |p| quantile_sorted(&column, p);
        let values = [
            *t,
            q(BAND_LEVELS[0]),
            q(BAND_LEVELS[1]),
            q(0.5),
            q(BAND_LEVELS[2]),
            q(BAND_LEVELS[3]),
            map_curve[i],
        ];
        text.push_str(&format::row(values));
        text.push('\n');
    }
    Ok(text)
}

fn infer_one(record: &PatientRecord, cfg: &RunConfig, out: &Path) -> Result<PathBuf> {
    let (chain, summary) = infer_patient(record, &cfg.inference())?;
    let write = |suffix: &str, text: String| -> Result<()> {
        let path = out.join(format!("{}{suffix}", record.id));
        std::fs::write(&path, text).map_err(CliError::io(&path))
    };
    write(CHAIN_SUFFIX, chain_csv(&chain))?;
    write(
        BAND_SUFFIX,
        band_csv(
            &chain,
            &summary,
            record.glucose[0],
            cfg.step,
            cfg.band_draws,
        )?,
    )?;
    let file = SummaryFile::new(
        &record.id,
        record.category,
        &summary,
        cfg.n_iter,
        cfg.burn_in,
        patient_seed(cfg.seed, &record.id),
    );
    let path = out.join(format!("{}{SUMMARY_SUFFIX}", record.id));
    file.write(&path)?;
    Ok(path)
}

/// Infers every patient on the worker pool. Per-patient failures are
/// returned in the outcomes and do not stop the run.
pub fn infer_records(records: &[PatientRecord], cfg: &RunConfig) -> Result<Vec<InferOutcome>> {
    std::fs::create_dir_all(&cfg.out).map_err(CliError::io(&cfg.out))?;
    cfg.install(|| {
        records
            .par_iter()
            .map(|r| InferOutcome {
                id: r.id.clone(),
                result: infer_one(r, cfg, &cfg.out),
            })
            .collect()
    })
}

/// Parses the input, infers all valid patients and reports problems on
/// `log`. Skipped rows and failed patients make the run partial.
pub fn run_infer(cfg: &RunConfig, log: &mut dyn std::io::Write) -> Result<Vec<InferOutcome>> {
    let parsed = parse_patients(cfg.input()?)?;
    for e in &parsed.errors {
        let _ = writeln!(log, "skipped {e}");
    }
    let outcomes = infer_records(&parsed.records, cfg)?;
    let mut failed = parsed.errors.len();
    for o in &outcomes {
        if let Err(e) = &o.result {
            failed += 1;
            let _ = writeln!(log, "patient {} failed: {e}", o.id);
        }
    }
    if failed > 0 {
        return Err(CliError::Partial {
            failed,
            total: parsed.records.len() + parsed.errors.len(),
        });
    }
    Ok(outcomes)
}
