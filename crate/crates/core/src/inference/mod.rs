//! Bayesian inversion of one patient's OGTT curve.
//!
//! Priors and likelihood live in [`prior`] and [`posterior`]; the sampler in
//! [`twalk`]; chain diagnostics in [`iat`]. This module ties them together
//! into [`infer_patient`] and reduces chains to [`PosteriorSummary`] values.

pub mod iat;
pub mod posterior;
pub mod prior;
pub mod twalk;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ParamVector, DEFAULT_STEP};
use crate::patient::PatientRecord;

pub use iat::iat;
pub use posterior::{log_likelihood, log_posterior, OgttLikelihood, OgttPosterior};
pub use prior::{log_prior, PriorSpec};
pub use twalk::{twalk_sample, Kernel, TwalkChain};

/// Quantile levels (in percent) reported for every parameter.
pub const QUANTILE_LEVELS: [u32; 9] = [10, 20, 30, 40, 50, 60, 70, 80, 90];
/// Post-burn-in samples required beyond the burn-in itself.
pub const MIN_KEPT_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceConfig {
    pub n_iter: usize,
    pub burn_in: usize,
    /// Base seed; each patient's chain seed is derived from it and the id.
    pub seed: u64,
    pub step: f64,
    pub prior: PriorSpec,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        Self {
            n_iter: 10_000,
            burn_in: 1_000,
            seed: 0,
            step: DEFAULT_STEP,
            prior: PriorSpec::default(),
        }
    }
}

impl InferenceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.n_iter {
            return Err(Error::InvalidArgument(format!(
                "burn-in ({}) must be smaller than the iteration count ({})",
                self.burn_in, self.n_iter
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        Ok(())
    }
}

/// MCMC output for one patient.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorChain {
    pub samples: Vec<ParamVector>,
    pub logpost: Vec<f64>,
    pub n_iter: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl PosteriorChain {
    pub fn kept(&self) -> (&[ParamVector], &[f64]) {
        (&self.samples[self.burn_in..], &self.logpost[self.burn_in..])
    }

    /// Post-burn-in trace of one coordinate.
    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.kept().0.iter().map(|s| s[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSummary {
    pub map: ParamVector,
    pub map_logpost: f64,
    pub cm: ParamVector,
    pub median: ParamVector,
    pub std: ParamVector,
    /// One vector per entry of [`QUANTILE_LEVELS`].
    pub quantiles: Vec<ParamVector>,
    /// Largest per-coordinate integrated autocorrelation time.
    pub iat: f64,
    pub iat_per_param: f64,
    pub rmse_at_map: f64,
}

impl PosteriorSummary {
    /// Parameter vector at quantile level `q` (percent, one of
    /// [`QUANTILE_LEVELS`]).
    pub fn quantile(&self, q: u32) -> Option<&ParamVector> {
        QUANTILE_LEVELS
            .iter()
            .position(|l| *l == q)
            .map(|i| &self.quantiles[i])
    }
}

/// Empirical quantile with linear interpolation between order statistics
/// (`sorted` must be ascending and nonempty).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Reduces a chain to point estimates, spreads and diagnostics. `y` is the
/// patient's data, used for the RMSE of the MAP fit.
pub fn summarize(chain: &PosteriorChain, y: &[f64], step: f64) -> Result<PosteriorSummary> {
    let needed = chain.burn_in + MIN_KEPT_SAMPLES;
    if chain.samples.len() < needed || chain.logpost.len() != chain.samples.len() {
        return Err(Error::ChainTooShort {
            len: chain.samples.len(),
            needed,
        });
    }
    let (kept, logpost) = chain.kept();
    let n = kept.len() as f64;

    let (map_idx, map_logpost) =
        logpost
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            });
    let map = kept[map_idx];

    let mut cm = [0.0; 5];
    let mut std = [0.0; 5];
    let mut median = [0.0; 5];
    let mut quantiles = vec![[0.0; 5]; QUANTILE_LEVELS.len()];
    let mut iat_max: f64 = 0.0;
    for i in 0..5 {
        let mut col: Vec<f64> = kept.iter().map(|s| s[i]).collect();
        // Welford: exact for a constant column
        let (mut mean, mut m2) = (0.0, 0.0);
        for (k, v) in col.iter().enumerate() {
            let delta = v - mean;
            mean += delta / (k + 1) as f64;
            m2 += delta * (v - mean);
        }
        cm[i] = mean;
        std[i] = if col.len() > 1 {
            (m2 / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        // a coordinate that never moved has no defined IAT; it does not
        // bound the others
        if let Ok(t) = iat(&col) {
            iat_max = iat_max.max(t);
        }
        col.sort_by(f64::total_cmp);
        median[i] = quantile_sorted(&col, 0.5);
        for (slot, q) in quantiles.iter_mut().zip(QUANTILE_LEVELS) {
            slot[i] = quantile_sorted(&col, q as f64 / 100.0);
        }
    }

    let lik = OgttLikelihood::new(y).with_step(step);
    let fit = lik.model_output(&map)?;
    let rmse_at_map = (y
        .iter()
        .zip(&fit)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        / y.len() as f64)
        .sqrt();

    Ok(PosteriorSummary {
        map,
        map_logpost,
        cm,
        median,
        std,
        quantiles,
        iat: iat_max,
        iat_per_param: iat_max / 5.0,
        rmse_at_map,
    })
}

/// Stable 64-bit seed for one patient's chain, mixed from the base seed and
/// the patient id (FNV-1a followed by a SplitMix64 finalizer).
pub fn patient_seed(base: u64, id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = h ^ base.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Prior draws screened when choosing the starting point.
pub const INIT_CANDIDATES: usize = 500;
const MAX_INIT_DRAWS: usize = 20 * INIT_CANDIDATES;
/// Relative perturbation separating the second t-walk point from the first.
const INIT_JITTER: f64 = 0.01;

/// Starting points for the t-walk: the prior draw with the highest
/// log-posterior among [`INIT_CANDIDATES`] draws with finite log-posterior,
/// and a copy of it perturbed by up to 1% per coordinate.
///
/// The t-walk scales its moves by the distance between its two points; a
/// second point far out in a low-density region stalls the chain.
pub fn initial_points(post: &OgttPosterior, seed: u64) -> Result<(ParamVector, ParamVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1417_0000_0001);
    let mut best: Option<(ParamVector, f64)> = None;
    let mut finite = 0;
    for _ in 0..MAX_INIT_DRAWS {
        let theta = post.prior.sample(&mut rng);
        if let Ok(lp) = post.log_posterior(&theta) {
            if lp.is_finite() {
                finite += 1;
                if best.is_none_or(|(_, b)| lp > b) {
                    best = Some((theta, lp));
                }
                if finite == INIT_CANDIDATES {
                    break;
                }
            }
        }
    }
    let Some((x0, _)) = best else {
        return Err(Error::Initialization(format!(
            "no prior draw with finite log-posterior in {MAX_INIT_DRAWS} attempts"
        )));
    };
    for _ in 0..MAX_INIT_DRAWS {
        let mut x0p = x0;
        for v in &mut x0p {
            *v *= 1.0 + INIT_JITTER * (2.0 * rng.random::<f64>() - 1.0);
        }
        let distinct = x0.iter().zip(&x0p).all(|(a, b)| a != b);
        if distinct && matches!(post.log_posterior(&x0p), Ok(v) if v.is_finite()) {
            return Ok((x0, x0p));
        }
    }
    Err(Error::Initialization(
        "could not perturb the starting point inside the support".into(),
    ))
}

/// Samples the posterior of one patient with the t-walk.
///
/// Parameter vectors at which the integrator fails are given zero posterior
/// density, so such proposals are rejected.
pub fn sample_posterior(
    post: &OgttPosterior,
    n_iter: usize,
    burn_in: usize,
    seed: u64,
) -> Result<PosteriorChain> {
    let (x0, x0p) = initial_points(post, seed)?;
    let logpost = |x: &[f64]| {
        let theta: ParamVector = x.try_into().expect("five-dimensional state");
        post.log_posterior(&theta).unwrap_or(f64::NEG_INFINITY)
    };
    let support = |x: &[f64]| post.prior.in_support(x);
    let chain = twalk_sample(logpost, support, &x0, &x0p, n_iter, seed)?;
    Ok(PosteriorChain {
        samples: chain
            .samples
            .iter()
            .map(|s| s.as_slice().try_into().expect("five-dimensional state"))
            .collect(),
        logpost: chain.logpost,
        n_iter,
        burn_in,
        seed,
    })
}

pub fn infer_patient(
    record: &PatientRecord,
    config: &InferenceConfig,
) -> Result<(PosteriorChain, PosteriorSummary)> {
    let run = || -> Result<_> {
        config.validate()?;
        if record.glucose.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite glucose value".into()));
        }
        let mut post = OgttPosterior::new(&record.glucose, config.prior);
        post.likelihood.step = config.step;
        let seed = patient_seed(config.seed, &record.id);
        let chain = sample_posterior(&post, config.n_iter, config.burn_in, seed)?;
        let summary = summarize(&chain, &record.glucose, config.step)?;
        Ok((chain, summary))
    };
    run().map_err(|e| e.for_patient(&record.id))
}
