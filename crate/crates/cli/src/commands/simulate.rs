use std::path::{Path, PathBuf};

use ogtt_core::model::{gi_erlang_stage, simulate, ModelParams, SystemState};

use crate::error::{CliError, Result};
use crate::format;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateRequest {
    pub params: ModelParams,
    /// Initial blood glucose; the basal level when `None`.
    pub g0: Option<f64>,
    pub t_end: f64,
    pub step: f64,
}

/// Header of the trajectory file: time, the seven states, then the last
/// stage of 1-, 2- and 3-stage Erlang gastrointestinal chains.
pub fn trajectory_header() -> String {
    let mut cols = vec!["t"];
    cols.extend(SystemState::NAMES);
    cols.extend(["gi_m1", "gi_m2", "gi_m3"]);
    cols.join(",")
}

pub fn run_simulate(req: &SimulateRequest, out_dir: &Path) -> Result<PathBuf> {
    req.params.validate()?;
    let g0 = req.g0.unwrap_or(req.params.gb);
    let traj = simulate(&req.params, g0, req.t_end, req.step)?;
    let mut text = trajectory_header();
    text.push('\n');
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let mut values = vec![*t];
        values.extend(s.to_array());
        for m in 1..=3 {
            values.push(gi_erlang_stage(m, *t, req.params.theta0, req.params.v0)?);
        }
        text.push_str(&format::row(values));
        text.push('\n');
    }
    std::fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let path = out_dir.join(TRAJECTORY_FILE);
    std::fs::write(&path, text).map_err(CliError::io(&path))?;
    Ok(path)
}
