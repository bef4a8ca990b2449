use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::model::{ParamVector, IDX_THETA0};

/// Independent gamma priors (shape, rate) on `(θ0, θ1, θ2, Gb, θ3)`, with θ0
/// additionally truncated from below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    pub shape: ParamVector,
    pub rate: ParamVector,
    pub theta0_lower: f64,
}

impl Default for PriorSpec {
    fn default() -> Self {
        Self {
            shape: [2.0, 10.0, 10.0, 90.0 * 90.0 / 20.0, 10.0],
            rate: [1.0, 1.0, 1.0, 90.0 / 20.0, 1.0],
            theta0_lower: 0.5,
        }
    }
}

impl PriorSpec {
    pub fn mean(&self, i: usize) -> f64 {
        self.shape[i] / self.rate[i]
    }

    pub fn variance(&self, i: usize) -> f64 {
        self.shape[i] / (self.rate[i] * self.rate[i])
    }

    pub fn in_support(&self, theta: &[f64]) -> bool {
        theta.len() == 5
            && theta.iter().all(|v| v.is_finite() && *v > 0.0)
            && theta[IDX_THETA0] > self.theta0_lower
    }

    /// Log-density of one gamma marginal (untruncated, normalized).
    pub fn component_log_density(&self, i: usize, x: f64) -> f64 {
        if x.is_nan() || x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let (a, b) = (self.shape[i], self.rate[i]);
        (a - 1.0) * x.ln() - b * x + a * b.ln() - ln_gamma(a)
    }

    /// Draws from the prior; the truncated θ0 marginal by rejection.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ParamVector {
        let mut out = [0.0; 5];
        for (i, slot) in out.iter_mut().enumerate() {
            let dist = Gamma::new(self.shape[i], 1.0 / self.rate[i])
                .expect("prior shape and rate are positive");
            *slot = loop {
                let v = dist.sample(rng);
                if i != IDX_THETA0 || v > self.theta0_lower {
                    break v;
                }
            };
        }
        out
    }
}

/// Sum of the gamma log-densities, or −∞ outside the support. The truncated
/// θ0 marginal is left unnormalized; the omitted constant does not depend on
/// the parameters.
pub fn log_prior(theta: &[f64], spec: &PriorSpec) -> f64 {
    if !spec.in_support(theta) {
        return f64::NEG_INFINITY;
    }
    theta
        .iter()
        .enumerate()
        .map(|(i, &x)| spec.component_log_density(i, x))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{IDX_GB, IDX_THETA1};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const INSIDE: ParamVector = [1.0, 10.0, 10.0, 90.0, 6.0];

    #[test]
    fn truncation_and_positivity() {
        let spec = PriorSpec::default();
        let mut t = INSIDE;
        t[IDX_THETA0] = 0.4;
        assert_eq!(log_prior(&t, &spec), f64::NEG_INFINITY);
        t[IDX_THETA0] = 0.5;
        assert_eq!(log_prior(&t, &spec), f64::NEG_INFINITY);
        let mut t = INSIDE;
        t[2] = -1.0;
        assert_eq!(log_prior(&t, &spec), f64::NEG_INFINITY);
        assert!(log_prior(&INSIDE, &spec).is_finite());
    }

    #[test]
    fn basal_prior_moments() {
        let spec = PriorSpec::default();
        assert!((spec.mean(IDX_GB) - 90.0).abs() < 1e-12);
        assert!((spec.variance(IDX_GB) - 20.0).abs() < 1e-12);
        assert!((spec.mean(IDX_THETA1) - 10.0).abs() < 1e-12);
        assert!((spec.variance(IDX_THETA1) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_unimodal_around_mode() {
        let spec = PriorSpec::default();
        let at = |x| spec.component_log_density(IDX_THETA1, x);
        assert!(at(9.0) > at(1.0));
        assert!(at(9.0) > at(30.0));
        assert!(at(9.0) > at(8.9) && at(9.0) > at(9.1));
    }

    #[test]
    fn gamma_density_matches_statrs() {
        use statrs::distribution::{Continuous, Gamma as SGamma};
        let spec = PriorSpec::default();
        let d = SGamma::new(spec.shape[IDX_GB], spec.rate[IDX_GB]).unwrap();
        for x in [80.0, 90.0, 97.5] {
            let ours = spec.component_log_density(IDX_GB, x);
            assert!((ours - d.ln_pdf(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn draws_respect_support() {
        let spec = PriorSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            assert!(spec.in_support(&spec.sample(&mut rng)));
        }
    }
}
