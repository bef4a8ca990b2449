use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ogtt_cli::commands::{self, verify, CohortSpec, SimulateRequest, VerifyOptions};
use ogtt_cli::{CliError, CommonArgs, Result, RunConfig};
use ogtt_core::model::{ModelParams, DEFAULT_V0};

#[derive(Parser)]
#[command(
    name = "ogtt",
    version,
    about = "OGTT glucose model: simulate, infer, classify, verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the model for one parameter vector.
    Simulate(SimulateArgs),
    /// MCMC inference for every patient in the input CSV.
    Infer(CommonArgs),
    /// Train the quantile SVM ensemble on inferred summaries.
    Classify(CommonArgs),
    /// Check the stability and identifiability results numerically.
    Verify(VerifyArgs),
    /// Write a synthetic patient cohort.
    MakeCohort(CohortArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1.0)]
    theta0: f64,
    #[arg(long, default_value_t = 10.0)]
    theta1: f64,
    #[arg(long, default_value_t = 10.0)]
    theta2: f64,
    #[arg(long, default_value_t = 90.0)]
    gb: f64,
    #[arg(long, default_value_t = 6.0)]
    theta3: f64,
    /// Initial blood glucose; defaults to the basal level.
    #[arg(long)]
    g0: Option<f64>,
    /// Initial gastrointestinal glucose.
    #[arg(long, default_value_t = DEFAULT_V0)]
    v0: f64,
    /// Simulated time span in hours.
    #[arg(long, default_value_t = 2.0)]
    t_end: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Random parameter draws per sweep.
    #[arg(long, default_value_t = 200)]
    draws: usize,
}

/// A `low:high` range.
fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected low:high")?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad number `{lo}`"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad number `{hi}`"))?;
    Ok((lo, hi))
}

#[derive(Args)]
struct CohortArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of patients.
    #[arg(long, default_value_t = 20)]
    size: usize,
    #[arg(long, value_parser = parse_range)]
    theta0_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range)]
    theta1_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range)]
    theta2_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range)]
    gb_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range)]
    theta3_range: Option<(f64, f64)>,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => {
            let cfg = RunConfig::resolve(&a.common)?;
            let params = ModelParams::from_vector(&[a.theta0, a.theta1, a.theta2, a.gb, a.theta3])
                .with_v0(a.v0);
            let req = SimulateRequest {
                params,
                g0: a.g0,
                t_end: a.t_end,
                step: cfg.step,
            };
            let path = commands::run_simulate(&req, &cfg.out)?;
            println!("wrote {}", path.display());
        }
        Command::Infer(a) => {
            let cfg = RunConfig::resolve(&a)?;
            let outcomes = commands::run_infer(&cfg, &mut std::io::stderr())?;
            println!(
                "inferred {} patients into {}",
                outcomes.len(),
                cfg.out.display()
            );
        }
        Command::Classify(a) => {
            let cfg = RunConfig::resolve(&a)?;
            let patients = commands::run_classify(&cfg)?;
            let flagged = patients
                .iter()
                .filter(|p| p.possible_misclassification())
                .count();
            let transition = patients.iter().filter(|p| p.prediction.transition).count();
            println!(
                "classified {} patients ({transition} in the transition zone, {flagged} possible misclassifications)",
                patients.len()
            );
        }
        Command::Verify(a) => {
            let cfg = RunConfig::resolve(&a.common)?;
            let opts = VerifyOptions {
                draws: a.draws,
                seed: cfg.seed,
                ..VerifyOptions::default()
            };
            let checks = commands::run_checks(&opts);
            verify::write_table(&checks, &mut std::io::stdout())
                .map_err(CliError::io(PathBuf::from("<stdout>")))?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(CliError::Checks {
                    failed,
                    total: checks.len(),
                });
            }
        }
        Command::MakeCohort(a) => {
            let cfg = RunConfig::resolve(&a.common)?;
            let mut spec = CohortSpec {
                size: a.size,
                seed: cfg.seed,
                step: cfg.step,
                ..CohortSpec::default()
            };
            let ranges = [
                a.theta0_range,
                a.theta1_range,
                a.theta2_range,
                a.gb_range,
                a.theta3_range,
            ];
            for (slot, r) in spec.ranges.iter_mut().zip(ranges) {
                if let Some(r) = r {
                    *slot = r;
                }
            }
            let cohort = commands::make_cohort(&spec)?;
            commands::write_cohort(&cfg.out, &cohort)?;
            println!("wrote {} patients to {}", cohort.len(), cfg.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
