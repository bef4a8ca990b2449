//! Seven-compartment glucose / insulin / glucagon model of the oral glucose
//! tolerance test.
//!
//! Insulin, glucagon and gastrointestinal glucose are each represented by a
//! two-stage Erlang chain, so the model reads
//!
//! ```text
//! G'  = L2 - I2 + θ0 V2
//! I1' = θ1 (G - Gb)+ + θ3 V2 - 2 λ5 I1        I2' = 2 λ5 (I1 - I2)
//! L1' = θ2 (Gb - G)+ - 2 λ7 L1                L2' = 2 λ7 (L1 - L2)
//! V1' = -2 θ0 V1                              V2' = 2 θ0 (V1 - V2)
//! ```
//!
//! Insulin and glucagon are scaled amounts; only glucose carries physical
//! units (mg/dl). Time is in hours.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inverse insulin / glucagon mean life in 1/hr (mean life of 31 minutes).
pub const HORMONE_CLEARANCE: f64 = 60.0 / 31.0;
/// Initial gastrointestinal glucose, mg/dl.
pub const DEFAULT_V0: f64 = 400.0;
/// Observation noise standard deviation, mg/dl.
pub const DEFAULT_SIGMA: f64 = 5.0;
/// Default integrator step, hr. Divides every OGTT sample time exactly.
pub const DEFAULT_STEP: f64 = 0.005;
/// OGTT sample times in hours (fasting, 30, 60, 90 and 120 minutes).
pub const OGTT_TIMES: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

/// The inferred parameter vector, ordered `(θ0, θ1, θ2, Gb, θ3)`.
pub type ParamVector = [f64; 5];

pub const PARAM_NAMES: [&str; 5] = ["theta0", "theta1", "theta2", "gb", "theta3"];

pub const IDX_THETA0: usize = 0;
pub const IDX_THETA1: usize = 1;
pub const IDX_THETA2: usize = 2;
pub const IDX_GB: usize = 3;
pub const IDX_THETA3: usize = 4;

/// Kinetic parameters of the Erlang-chain model together with the fixed
/// constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Gastrointestinal absorption rate, 1/hr.
    pub theta0: f64,
    /// Insulin response to blood glucose, 1/hr².
    pub theta1: f64,
    /// Glucagon response to blood glucose, 1/hr².
    pub theta2: f64,
    /// Basal glucose, mg/dl.
    pub gb: f64,
    /// Insulin response to gastrointestinal glucose, 1/hr².
    pub theta3: f64,
    pub lambda5: f64,
    pub lambda7: f64,
    pub v0: f64,
    pub sigma: f64,
}

impl ModelParams {
    /// Builds parameters from an inferred vector with the fixed constants at
    /// their default values.
    pub fn from_vector(theta: &ParamVector) -> Self {
        Self {
            theta0: theta[IDX_THETA0],
            theta1: theta[IDX_THETA1],
            theta2: theta[IDX_THETA2],
            gb: theta[IDX_GB],
            theta3: theta[IDX_THETA3],
            lambda5: HORMONE_CLEARANCE,
            lambda7: HORMONE_CLEARANCE,
            v0: DEFAULT_V0,
            sigma: DEFAULT_SIGMA,
        }
    }

    pub fn to_vector(&self) -> ParamVector {
        [self.theta0, self.theta1, self.theta2, self.gb, self.theta3]
    }

    pub fn with_v0(mut self, v0: f64) -> Self {
        self.v0 = v0;
        self
    }

    /// Checks that every rate is positive and finite and that the basal level
    /// lies in (0, 300) mg/dl. The θ0 > 0.5 truncation belongs to the prior,
    /// not to the model.
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("theta0", self.theta0),
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("theta3", self.theta3),
            ("lambda5", self.lambda5),
            ("lambda7", self.lambda7),
            ("sigma", self.sigma),
        ];
        for (name, v) in rates {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.gb > 0.0 && self.gb < 300.0) {
            return Err(Error::InvalidArgument(format!(
                "basal glucose must lie in (0, 300), got {}",
                self.gb
            )));
        }
        if !(self.v0.is_finite() && self.v0 >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "V0 must be nonnegative, got {}",
                self.v0
            )));
        }
        Ok(())
    }
}

/// State of the seven compartments.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SystemState {
    pub g: f64,
    pub i1: f64,
    pub i2: f64,
    pub l1: f64,
    pub l2: f64,
    pub v1: f64,
    pub v2: f64,
}

impl SystemState {
    pub const NAMES: [&'static str; 7] = ["G", "I1", "I2", "L1", "L2", "V1", "V2"];

    /// OGTT initial condition: fasting glucose, no hormone excursion and the
    /// whole drink in the first gastrointestinal stage.
    pub fn initial(g0: f64, v0: f64) -> Self {
        Self {
            g: g0,
            v1: v0,
            ..Self::default()
        }
    }

    pub fn to_array(self) -> [f64; 7] {
        [self.g, self.i1, self.i2, self.l1, self.l2, self.v1, self.v2]
    }

    pub fn from_array(a: [f64; 7]) -> Self {
        Self {
            g: a[0],
            i1: a[1],
            i2: a[2],
            l1: a[3],
            l2: a[4],
            v1: a[5],
            v2: a[6],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Time grid and the state at every grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SystemState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn glucose(&self) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(|s| s.g)
    }
}

#[inline]
pub fn positive_part(x: f64) -> f64 {
    if x >= 0.0 {
        x
    } else {
        0.0
    }
}

/// Right-hand side of the Erlang-chain system.
pub fn rhs(state: &SystemState, p: &ModelParams) -> SystemState {
    let above = positive_part(state.g - p.gb);
    let below = positive_part(p.gb - state.g);
    let k5 = 2.0 * p.lambda5;
    let k7 = 2.0 * p.lambda7;
    let k0 = 2.0 * p.theta0;
    SystemState {
        g: state.l2 - state.i2 + p.theta0 * state.v2,
        i1: p.theta1 * above + p.theta3 * state.v2 - k5 * state.i1,
        i2: k5 * state.i1 - k5 * state.i2,
        l1: p.theta2 * below - k7 * state.l1,
        l2: k7 * state.l1 - k7 * state.l2,
        v1: -k0 * state.v1,
        v2: k0 * state.v1 - k0 * state.v2,
    }
}

fn rk4_step(y: [f64; 7], h: f64, p: &ModelParams) -> [f64; 7] {
    let f = |y: [f64; 7]| rhs(&SystemState::from_array(y), p).to_array();
    let axpy = |a: f64, x: &[f64; 7], y: &[f64; 7]| {
        let mut out = *y;
        for (o, xi) in out.iter_mut().zip(x) {
            *o += a * xi;
        }
        out
    };
    let k1 = f(y);
    let k2 = f(axpy(0.5 * h, &k1, &y));
    let k3 = f(axpy(0.5 * h, &k2, &y));
    let k4 = f(axpy(h, &k3, &y));
    let mut out = y;
    for i in 0..7 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Number of integration intervals needed to reach `t_end` with steps no
/// longer than `step`. A grid that already lands on `t_end` (up to round-off)
/// is not extended by a sliver step.
fn interval_count(t_end: f64, step: f64) -> usize {
    let ratio = t_end / step;
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
        rounded.max(1.0) as usize
    } else {
        ratio.ceil() as usize
    }
}

/// Integrates the model from the OGTT initial state `(g0, 0, 0, 0, 0, V0, 0)`
/// with classical fixed-step RK4.
///
/// Grid points are `i * step`, and the last point is exactly `t_end`.
pub fn simulate(params: &ModelParams, g0: f64, t_end: f64, step: f64) -> Result<Trajectory> {
    simulate_from(params, SystemState::initial(g0, params.v0), t_end, step)
}

/// Same as [`simulate`] but from an arbitrary initial state.
pub fn simulate_from(
    params: &ModelParams,
    initial: SystemState,
    t_end: f64,
    step: f64,
) -> Result<Trajectory> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {step}"
        )));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if !initial.is_finite() {
        return Err(Error::IntegrationFailure { time: 0.0 });
    }
    let n = interval_count(t_end, step);
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    times.push(0.0);
    states.push(initial);
    let mut y = initial.to_array();
    let mut t_prev = 0.0;
    for i in 1..=n {
        let t = if i == n { t_end } else { i as f64 * step };
        y = rk4_step(y, t - t_prev, params);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::IntegrationFailure { time: t });
        }
        times.push(t);
        states.push(SystemState::from_array(y));
        t_prev = t;
    }
    Ok(Trajectory { times, states })
}

/// Analytic solution of the decoupled gastrointestinal chain,
/// `(V1, V2) = (V0 e^{-2θ0 t}, 2θ0 t V0 e^{-2θ0 t})`.
pub fn gi_closed_form(t: f64, theta0: f64, v0: f64) -> (f64, f64) {
    let decay = (-2.0 * theta0 * t).exp();
    (v0 * decay, 2.0 * theta0 * t * v0 * decay)
}

/// Content of the last stage of an `m`-stage Erlang gastrointestinal chain
/// (each stage with rate `m θ0`), started with `V0` in the first stage.
pub fn gi_erlang_stage(m: u32, t: f64, theta0: f64, v0: f64) -> Result<f64> {
    if !(1..=3).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "stage count must be 1, 2 or 3, got {m}"
        )));
    }
    let rate_t = m as f64 * theta0 * t;
    let factorial: f64 = (1..m).map(f64::from).product();
    Ok(v0 * rate_t.powi(m as i32 - 1) * (-rate_t).exp() / factorial)
}

/// Glucose at each requested time, read from the nearest grid point.
pub fn observe(traj: &Trajectory, times: &[f64]) -> Result<Vec<f64>> {
    let (Some(&start), Some(&end)) = (traj.times.first(), traj.times.last()) else {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    };
    let slack = 1e-9 * end.abs().max(1.0);
    times
        .iter()
        .map(|&t| {
            if !(t >= start - slack && t <= end + slack) {
                return Err(Error::OutOfRange {
                    time: t,
                    start,
                    end,
                });
            }
            let idx = traj.times.partition_point(|&x| x < t);
            let nearest = if idx == 0 {
                0
            } else if idx >= traj.times.len() {
                traj.times.len() - 1
            } else if (traj.times[idx] - t).abs() < (t - traj.times[idx - 1]).abs() {
                idx
            } else {
                idx - 1
            };
            Ok(traj.states[nearest].g)
        })
        .collect()
}

/// Noiseless model glucose at the OGTT sample times, starting from `g0`.
pub fn model_glucose(params: &ModelParams, g0: f64, times: &[f64], step: f64) -> Result<Vec<f64>> {
    let t_end = times.iter().copied().fold(0.0, f64::max);
    let traj = simulate(params, g0, t_end.max(step), step)?;
    observe(&traj, times)
}
