//! The t-walk: a scale-invariant MCMC sampler on two coupled points.
//!
//! The sampler targets `π(x) π(x')` on the product space. Each step picks one
//! of the two points at random and moves it with one of four kernels:
//!
//! * **walk**: `y = h + (h - f) z` coordinate-wise, `z` from a density on
//!   `[-aw/(1+aw), aw]` with `aw = 1.5`.
//! * **traverse**: `y = f + β (f - h)`, `β` from a density with parameter
//!   `at = 6`; the Jacobian adds `β^(nφ - 2)` to the acceptance ratio.
//! * **blow**: Gaussian centred at the other point, scale `max |f - h|`.
//! * **hop**: Gaussian centred at the moving point, scale `max |f - h| / 3`.
//!
//! Here `h` is the moving point and `f` the fixed one. Every kernel only
//! touches a random subset of coordinates, each included with probability
//! `min(n, 4) / n`. Kernel probabilities and scales are the defaults of
//! Christen & Fox (2010), "A general purpose sampling algorithm for
//! continuous distributions (the t-walk)", Bayesian Analysis 5(2).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const WALK_SCALE: f64 = 1.5;
const TRAVERSE_SCALE: f64 = 6.0;
const EXPECTED_MOVED_COORDS: f64 = 4.0;
/// Cumulative selection probabilities of traverse, walk, blow and hop.
const KERNEL_CDF: [f64; 4] = [0.4918, 0.9836, 0.9918, 1.0];
const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    Traverse,
    Walk,
    Blow,
    Hop,
}

impl Kernel {
    pub const ALL: [Kernel; 4] = [Kernel::Traverse, Kernel::Walk, Kernel::Blow, Kernel::Hop];

    fn index(self) -> usize {
        self as usize
    }
}

/// Trace of the primary point of a t-walk run.
#[derive(Debug, Clone, PartialEq)]
pub struct TwalkChain {
    pub dim: usize,
    /// Primary point after each step.
    pub samples: Vec<Vec<f64>>,
    pub logpost: Vec<f64>,
    pub seed: u64,
    /// Proposals per kernel, indexed like [`Kernel::ALL`].
    pub proposed: [usize; 4],
    pub accepted: [usize; 4],
}

impl TwalkChain {
    pub fn acceptance_rate(&self) -> f64 {
        let p: usize = self.proposed.iter().sum();
        let a: usize = self.accepted.iter().sum();
        if p == 0 {
            0.0
        } else {
            a as f64 / p as f64
        }
    }
}

struct Walker<'a, F, S, R> {
    logpost: F,
    support: S,
    rng: &'a mut R,
    dim: usize,
    p_phi: f64,
}

struct Proposal {
    y: Vec<f64>,
    /// log of the Hastings / Jacobian correction, excluding the target ratio.
    log_correction: f64,
}

impl<F, S, R> Walker<'_, F, S, R>
where
    F: FnMut(&[f64]) -> f64,
    S: Fn(&[f64]) -> bool,
    R: Rng,
{
    fn draw_phi(&mut self) -> Vec<bool> {
        (0..self.dim)
            .map(|_| self.rng.random::<f64>() < self.p_phi)
            .collect()
    }

    fn draw_beta(&mut self) -> f64 {
        let at = TRAVERSE_SCALE;
        let u: f64 = self.rng.random();
        if u < (at - 1.0) / (2.0 * at) {
            self.rng.random::<f64>().powf(1.0 / (at + 1.0))
        } else {
            self.rng.random::<f64>().powf(1.0 / (1.0 - at))
        }
    }

    fn walk(&mut self, h: &[f64], f: &[f64]) -> Option<Proposal> {
        let phi = self.draw_phi();
        let aw = WALK_SCALE;
        let mut y = h.to_vec();
        for i in 0..self.dim {
            if phi[i] {
                let u: f64 = self.rng.random();
                let z = aw / (1.0 + aw) * (aw * u * u + 2.0 * u - 1.0);
                y[i] = h[i] + (h[i] - f[i]) * z;
            }
        }
        Some(Proposal {
            y,
            log_correction: 0.0,
        })
    }

    fn traverse(&mut self, h: &[f64], f: &[f64]) -> Option<Proposal> {
        let beta = self.draw_beta();
        let phi = self.draw_phi();
        let mut y = h.to_vec();
        let mut n_phi = 0;
        for i in 0..self.dim {
            if phi[i] {
                y[i] = f[i] + beta * (f[i] - h[i]);
                n_phi += 1;
            }
        }
        if n_phi == 0 {
            return None;
        }
        Some(Proposal {
            y,
            log_correction: (n_phi as f64 - 2.0) * beta.ln(),
        })
    }

    fn blow(&mut self, h: &[f64], f: &[f64]) -> Option<Proposal> {
        let phi = self.draw_phi();
        let sigma = masked_spread(&phi, h, f);
        if phi.iter().all(|p| !p) || sigma <= 0.0 {
            return None;
        }
        let mut y = h.to_vec();
        for i in 0..self.dim {
            if phi[i] {
                let z: f64 = self.rng.sample(StandardNormal);
                y[i] = f[i] + sigma * z;
            }
        }
        let sigma_back = masked_spread(&phi, &y, f);
        if sigma_back <= 0.0 {
            return None;
        }
        let forward = gaussian_energy(&phi, &y, f, sigma);
        let backward = gaussian_energy(&phi, h, f, sigma_back);
        Some(Proposal {
            y,
            log_correction: forward - backward,
        })
    }

    fn hop(&mut self, h: &[f64], f: &[f64]) -> Option<Proposal> {
        let phi = self.draw_phi();
        let sigma = masked_spread(&phi, h, f) / 3.0;
        if phi.iter().all(|p| !p) || sigma <= 0.0 {
            return None;
        }
        let mut y = h.to_vec();
        for i in 0..self.dim {
            if phi[i] {
                let z: f64 = self.rng.sample(StandardNormal);
                y[i] = h[i] + sigma * z;
            }
        }
        let sigma_back = masked_spread(&phi, &y, f) / 3.0;
        if sigma_back <= 0.0 {
            return None;
        }
        let forward = gaussian_energy(&phi, &y, h, sigma);
        let backward = gaussian_energy(&phi, h, &y, sigma_back);
        Some(Proposal {
            y,
            log_correction: forward - backward,
        })
    }
}

/// `max_{i in φ} |f_i - h_i|`.
fn masked_spread(phi: &[bool], h: &[f64], f: &[f64]) -> f64 {
    phi.iter()
        .zip(h.iter().zip(f))
        .filter(|(p, _)| **p)
        .map(|(_, (a, b))| (b - a).abs())
        .fold(0.0, f64::max)
}

/// Negative log-density of an isotropic Gaussian on the φ-coordinates.
fn gaussian_energy(phi: &[bool], x: &[f64], centre: &[f64], sigma: f64) -> f64 {
    let mut n = 0.0;
    let mut sq = 0.0;
    for i in 0..x.len() {
        if phi[i] {
            n += 1.0;
            sq += (x[i] - centre[i]).powi(2);
        }
    }
    n / 2.0 * LN_2PI + n * sigma.ln() + sq / (2.0 * sigma * sigma)
}

/// Runs `n_iter` t-walk steps and returns the trace of the primary point.
///
/// `logpost` is the log of the (unnormalized) target and is only evaluated
/// at points where `support` holds. The chain is a deterministic function of
/// the inputs and `seed`.
pub fn twalk_sample<F, S>(
    mut logpost: F,
    support: S,
    x0: &[f64],
    x0p: &[f64],
    n_iter: usize,
    seed: u64,
) -> Result<TwalkChain>
where
    F: FnMut(&[f64]) -> f64,
    S: Fn(&[f64]) -> bool,
{
    let dim = x0.len();
    if dim == 0 || x0p.len() != dim {
        return Err(Error::Initialization(format!(
            "initial points must share a nonzero dimension, got {} and {}",
            x0.len(),
            x0p.len()
        )));
    }
    if x0.iter().zip(x0p).all(|(a, b)| a == b) {
        return Err(Error::Initialization("initial points coincide".into()));
    }
    if !support(x0) || !support(x0p) {
        return Err(Error::Initialization(
            "initial point outside the support".into(),
        ));
    }
    let mut x = x0.to_vec();
    let mut xp = x0p.to_vec();
    let mut ux = logpost(&x);
    let mut uxp = logpost(&xp);
    if !ux.is_finite() || !uxp.is_finite() {
        return Err(Error::Initialization(format!(
            "log-posterior not finite at the initial points ({ux}, {uxp})"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain = TwalkChain {
        dim,
        samples: Vec::with_capacity(n_iter),
        logpost: Vec::with_capacity(n_iter),
        seed,
        proposed: [0; 4],
        accepted: [0; 4],
    };

    let p_phi = (dim as f64).min(EXPECTED_MOVED_COORDS) / dim as f64;
    let mut walker = Walker {
        logpost: &mut logpost,
        support: &support,
        rng: &mut rng,
        dim,
        p_phi,
    };

    for _ in 0..n_iter {
        let k: f64 = walker.rng.random();
        let kernel = Kernel::ALL[KERNEL_CDF.iter().position(|c| k < *c).unwrap_or(3)];
        let move_primary = walker.rng.random::<f64>() >= 0.5;
        let (h, f, uh) = if move_primary {
            (&x, &xp, ux)
        } else {
            (&xp, &x, uxp)
        };

        let proposal = match kernel {
            Kernel::Walk => walker.walk(h, f),
            Kernel::Traverse => walker.traverse(h, f),
            Kernel::Blow => walker.blow(h, f),
            Kernel::Hop => walker.hop(h, f),
        };
        chain.proposed[kernel.index()] += 1;

        if let Some(Proposal { y, log_correction }) = proposal {
            // the two points must stay distinct in every coordinate
            let distinct = y.iter().zip(f.iter()).all(|(a, b)| a != b);
            if distinct && (walker.support)(&y) {
                let uy = (walker.logpost)(&y);
                let log_ratio = uy - uh + log_correction;
                if uy.is_finite() && !log_ratio.is_nan() {
                    let u: f64 = walker.rng.random();
                    if u.ln() < log_ratio {
                        chain.accepted[kernel.index()] += 1;
                        if move_primary {
                            x = y;
                            ux = uy;
                        } else {
                            xp = y;
                            uxp = uy;
                        }
                    }
                }
            }
        }
        chain.samples.push(x.clone());
        chain.logpost.push(ux);
    }
    Ok(chain)
}
