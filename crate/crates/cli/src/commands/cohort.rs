//! Synthetic cohorts: parameters drawn log-uniformly from ranges, glucose
//! simulated from a fasting value near the basal level, Gaussian noise added.
//!
//! Log-uniform draws put enough weight on small insulin gains for the
//! default ranges to yield both healthy and impaired tolerance curves.

use std::path::Path;

use ogtt_core::model::{model_glucose, ModelParams, ParamVector, OGTT_TIMES, PARAM_NAMES};
use ogtt_core::patient::GLUCOSE_RANGE;
use ogtt_core::PatientRecord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{CliError, Result};
use crate::format;
use crate::patients::write_patients;

pub const PATIENTS_FILE: &str = "patients.csv";
pub const TRUTH_FILE: &str = "truth.csv";
const MAX_DRAWS_PER_PATIENT: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct CohortSpec {
    pub size: usize,
    /// Inclusive `(low, high)` per parameter, in `PARAM_NAMES` order.
    pub ranges: [(f64, f64); 5],
    pub sigma: f64,
    pub step: f64,
    pub seed: u64,
}

impl Default for CohortSpec {
    fn default() -> Self {
        Self {
            size: 20,
            ranges: [
                (0.6, 2.0),
                (0.5, 12.0),
                (2.0, 20.0),
                (80.0, 120.0),
                (0.5, 8.0),
            ],
            sigma: ogtt_core::model::DEFAULT_SIGMA,
            step: ogtt_core::model::DEFAULT_STEP,
            seed: 0,
        }
    }
}

/// Noisy OGTT for one parameter vector: the fasting value is
/// `Gb + N(0, σ²)`, the model is started there and the later four readings
/// get independent `N(0, σ²)` noise.
pub fn synthetic_ogtt<R: Rng>(
    theta: &ParamVector,
    sigma: f64,
    step: f64,
    rng: &mut R,
) -> Result<[f64; 5]> {
    let noise = Normal::new(0.0, sigma).map_err(|e| CliError::Config(e.to_string()))?;
    let params = ModelParams::from_vector(theta);
    let y0 = params.gb + noise.sample(rng);
    let g = model_glucose(&params, y0, &OGTT_TIMES, step)?;
    let mut y = [y0, 0.0, 0.0, 0.0, 0.0];
    for (yi, gi) in y.iter_mut().zip(&g).skip(1) {
        *yi = gi + noise.sample(rng);
    }
    Ok(y)
}

pub fn make_cohort(spec: &CohortSpec) -> Result<Vec<(PatientRecord, ParamVector)>> {
    if spec
        .ranges
        .iter()
        .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi))
    {
        return Err(CliError::Config(
            "parameter ranges must satisfy low <= high".into(),
        ));
    }
    if spec.ranges[0].0 <= 0.5 || spec.ranges.iter().any(|(lo, _)| *lo <= 0.0) {
        return Err(CliError::Config(
            "ranges must be positive, with theta0 above 0.5".into(),
        ));
    }
    let width = format!("{}", spec.size.max(1)).len().max(3);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut cohort = Vec::with_capacity(spec.size);
    for k in 0..spec.size {
        let id = format!("P{:0width$}", k + 1);
        let mut accepted = None;
        for _ in 0..MAX_DRAWS_PER_PATIENT {
            let theta: ParamVector = std::array::from_fn(|i| {
                let (lo, hi) = spec.ranges[i];
                if lo == hi {
                    lo
                } else {
                    rng.random_range(lo.ln()..=hi.ln()).exp().clamp(lo, hi)
                }
            });
            let Ok(y) = synthetic_ogtt(&theta, spec.sigma, spec.step, &mut rng) else {
                continue;
            };
            let y = y.map(format::round);
            if y.iter()
                .all(|v| *v > GLUCOSE_RANGE.0 && *v < GLUCOSE_RANGE.1)
            {
                accepted = Some((PatientRecord::new(id.clone(), y)?, theta.map(format::round)));
                break;
            }
        }
        cohort.push(accepted.ok_or_else(|| {
            CliError::Config(format!("could not draw an in-range patient for {id}"))
        })?);
    }
    Ok(cohort)
}

/// Writes `patients.csv` and `truth.csv` into `out_dir`.
pub fn write_cohort(out_dir: &Path, cohort: &[(PatientRecord, ParamVector)]) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let records: Vec<PatientRecord> = cohort.iter().map(|(r, _)| r.clone()).collect();
    write_patients(&out_dir.join(PATIENTS_FILE), &records)?;
    let mut text = format!("id,{},category\n", PARAM_NAMES.join(","));
    for (r, theta) in cohort {
        text.push_str(&format!(
            "{},{},{}\n",
            r.id,
            format::row(*theta),
            r.category
        ));
    }
    let path = out_dir.join(TRUTH_FILE);
    std::fs::write(&path, text).map_err(CliError::io(&path))
}
