use std::f64::consts::PI;

use crate::error::Result;
use crate::inference::prior::{log_prior, PriorSpec};
use crate::model::{
    model_glucose, ModelParams, ParamVector, DEFAULT_SIGMA, DEFAULT_STEP, OGTT_TIMES,
};

/// Gaussian observation model for one patient's OGTT glucose values.
///
/// The model trajectory starts from the fasting observation, `G(0) = y[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OgttLikelihood {
    pub y: Vec<f64>,
    pub times: Vec<f64>,
    pub sigma: f64,
    pub step: f64,
}

impl OgttLikelihood {
    pub fn new(y: &[f64]) -> Self {
        Self {
            y: y.to_vec(),
            times: OGTT_TIMES.to_vec(),
            sigma: DEFAULT_SIGMA,
            step: DEFAULT_STEP,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn model_output(&self, theta: &ParamVector) -> Result<Vec<f64>> {
        let mut params = ModelParams::from_vector(theta);
        params.sigma = self.sigma;
        model_glucose(&params, self.y[0], &self.times, self.step)
    }

    pub fn sse(&self, theta: &ParamVector) -> Result<f64> {
        let g = self.model_output(theta)?;
        Ok(self.y.iter().zip(&g).map(|(y, g)| (y - g).powi(2)).sum())
    }

    /// `-(n/2) ln(2πσ²) - SSE / (2σ²)`.
    pub fn log_likelihood(&self, theta: &ParamVector) -> Result<f64> {
        let sse = self.sse(theta)?;
        Ok(self.log_normalizer() - sse / (2.0 * self.sigma * self.sigma))
    }

    pub fn log_normalizer(&self) -> f64 {
        -(self.y.len() as f64) / 2.0 * (2.0 * PI * self.sigma * self.sigma).ln()
    }
}

pub fn log_likelihood(theta: &ParamVector, y: &[f64], times: &[f64]) -> Result<f64> {
    let mut lik = OgttLikelihood::new(y);
    lik.times = times.to_vec();
    lik.log_likelihood(theta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OgttPosterior {
    pub prior: PriorSpec,
    pub likelihood: OgttLikelihood,
}

impl OgttPosterior {
    pub fn new(y: &[f64], prior: PriorSpec) -> Self {
        Self {
            prior,
            likelihood: OgttLikelihood::new(y),
        }
    }

    /// Unnormalized log-posterior; −∞ outside the prior support, in which
    /// case the ODE is not integrated.
    pub fn log_posterior(&self, theta: &ParamVector) -> Result<f64> {
        let lp = log_prior(theta, &self.prior);
        if lp == f64::NEG_INFINITY {
            return Ok(lp);
        }
        Ok(lp + self.likelihood.log_likelihood(theta)?)
    }
}

pub fn log_posterior(
    theta: &ParamVector,
    y: &[f64],
    times: &[f64],
    spec: &PriorSpec,
) -> Result<f64> {
    let mut post = OgttPosterior::new(y, *spec);
    post.likelihood.times = times.to_vec();
    post.log_posterior(theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    const THETA: ParamVector = [1.0, 10.0, 10.0, 90.0, 6.0];

    fn exact_data() -> Vec<f64> {
        let p = ModelParams::from_vector(&THETA);
        model_glucose(&p, 92.0, &OGTT_TIMES, DEFAULT_STEP).unwrap()
    }

    #[test]
    fn zero_residual_value() {
        let y = exact_data();
        let ll = log_likelihood(&THETA, &y, &OGTT_TIMES).unwrap();
        let expected = -2.5 * (2.0 * PI * 25.0).ln();
        assert!((ll - expected).abs() < 1e-12);
    }

    #[test]
    fn one_sigma_residual_costs_half() {
        let mut y = exact_data();
        let base = log_likelihood(&THETA, &y, &OGTT_TIMES).unwrap();
        y[3] += 5.0;
        let shifted = log_likelihood(&THETA, &y, &OGTT_TIMES).unwrap();
        assert!((base - shifted - 0.5).abs() < 1e-12);
    }

    #[test]
    fn difference_is_sse_difference() {
        let y = [95.0, 160.0, 150.0, 120.0, 100.0];
        let lik = OgttLikelihood::new(&y);
        let other = [1.4, 7.0, 12.0, 88.0, 9.0];
        let dl = lik.log_likelihood(&THETA).unwrap() - lik.log_likelihood(&other).unwrap();
        let dsse = lik.sse(&THETA).unwrap() - lik.sse(&other).unwrap();
        assert!((dl + dsse / 50.0).abs() < 1e-9);
    }

    #[test]
    fn posterior_is_prior_plus_likelihood() {
        let y = [95.0, 160.0, 150.0, 120.0, 100.0];
        let spec = PriorSpec::default();
        let lp = log_posterior(&THETA, &y, &OGTT_TIMES, &spec).unwrap();
        let sum = log_prior(&THETA, &spec) + log_likelihood(&THETA, &y, &OGTT_TIMES).unwrap();
        assert!((lp - sum).abs() < 1e-12);
        let mut out = THETA;
        out[0] = 0.3;
        assert_eq!(
            log_posterior(&out, &y, &OGTT_TIMES, &spec).unwrap(),
            f64::NEG_INFINITY
        );
    }
}
