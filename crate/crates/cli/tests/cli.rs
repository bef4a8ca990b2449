use std::path::Path;
use std::process::Command;

use ogtt_cli::commands::classify::{classify_summaries, report_csv};
use ogtt_cli::commands::infer::BAND_SUFFIX;
use ogtt_cli::commands::simulate::TRAJECTORY_FILE;
use ogtt_cli::commands::{make_cohort, run_checks, write_cohort, CohortSpec, VerifyOptions};
use ogtt_cli::summary::{read_summaries, SummaryFile};
use ogtt_cli::{CliError, CommonArgs, RunConfig};
use ogtt_core::inference::{PosteriorSummary, QUANTILE_LEVELS};
use ogtt_core::model::gi_closed_form;
use ogtt_core::{Category, Class};

fn ogtt(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ogtt"))
        .args(args)
        .output()
        .unwrap()
}

fn read_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn simulate_equilibrium_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ogtt(&["simulate", "--out", out, "--gb", "95", "--v0", "0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_rows(&dir.path().join(TRAJECTORY_FILE));
    assert_eq!(header[..2], ["t", "G"]);
    assert_eq!(rows.len(), 401);
    assert!(rows.iter().all(|r| r[1] == 95.0));
}

#[test]
fn simulate_gi_columns_match_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(ogtt(&["simulate", "--out", out, "--theta0", "1.7"])
        .status
        .success());
    let (header, rows) = read_rows(&dir.path().join(TRAJECTORY_FILE));
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (v1, v2, m2) = (col("V1"), col("V2"), col("gi_m2"));
    for r in &rows {
        let (a, b) = gi_closed_form(r[0], 1.7, 400.0);
        assert!((r[v1] - a).abs() <= 1e-6 * a);
        assert!((r[v2] - b).abs() <= 1e-6 * b.max(1e-9));
        assert!((r[m2] - b).abs() <= 1e-9 * b.max(1.0));
    }
}

#[test]
fn simulate_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(ogtt(&["simulate", "--out", out]).status.success());
    let path = dir.path().join(TRAJECTORY_FILE);
    let text = std::fs::read_to_string(&path).unwrap();
    let (_, rows) = read_rows(&path);
    let mut rebuilt = text.lines().next().unwrap().to_string();
    rebuilt.push('\n');
    for r in rows {
        rebuilt.push_str(&ogtt_cli::format::row(r));
        rebuilt.push('\n');
    }
    assert_eq!(rebuilt, text);
}

fn cohort_config(dir: &Path, size: usize, seed: u64) -> RunConfig {
    let cohort = make_cohort(&CohortSpec {
        size,
        seed,
        ..CohortSpec::default()
    })
    .unwrap();
    write_cohort(&dir.join("cohort"), &cohort).unwrap();
    RunConfig::resolve(&CommonArgs {
        input: Some(dir.join("cohort/patients.csv")),
        out: Some(dir.join("infer")),
        seed: Some(seed),
        workers: Some(2),
        ..CommonArgs::default()
    })
    .unwrap()
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn infer_cohort_of_five() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = cohort_config(dir.path(), 5, 3);
    let outcomes = ogtt_cli::commands::run_infer(&cfg, &mut std::io::sink()).unwrap();
    assert_eq!(outcomes.len(), 5);
    let summaries = read_summaries(&cfg.out).unwrap();
    assert_eq!(summaries.len(), 5);
    for s in &summaries {
        assert!(s.rmse_map <= 10.0, "{}: {}", s.id, s.rmse_map);
        assert_eq!((s.n_iter, s.burn_in), (10_000, 1_000));
        let (header, band) = read_rows(&cfg.out.join(format!("{}{BAND_SUFFIX}", s.id)));
        assert_eq!(
            header,
            ["t", "q025", "q25", "median", "q75", "q975", "map_traj"]
        );
        assert_eq!(band.len(), 41);
        for r in &band {
            assert!(r[1] <= r[2] && r[2] <= r[3] && r[3] <= r[4] && r[4] <= r[5]);
        }
    }

    // a second run into a fresh directory reproduces every byte
    let first = dir_contents(&cfg.out);
    let again = RunConfig {
        out: dir.path().join("again"),
        workers: Some(1),
        ..cfg.clone()
    };
    ogtt_cli::commands::run_infer(&again, &mut std::io::sink()).unwrap();
    assert_eq!(dir_contents(&again.out), first);
}

#[test]
fn infer_reports_bad_rows_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.csv");
    std::fs::write(
        &input,
        "id,g0,g30,g60,g90,g120\nA,92,150,140,110,95\nB,abc,1,2,3,4\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = ogtt(&[
        "infer",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--iters",
        "600",
        "--burnin",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert!(out.join("A.summary.json").exists());
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.csv");
    let o = ogtt(&[
        "infer",
        "--input",
        missing.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = ogtt(&["infer", "--iters", "10", "--burnin", "20"]);
    assert_eq!(o.status.code(), Some(2));
}

fn summary_file(id: &str, category: Category, theta1: f64, theta3: f64) -> SummaryFile {
    let v = [1.0, theta1, 10.0, 90.0, theta3];
    let s = PosteriorSummary {
        map: v,
        map_logpost: -20.0,
        cm: v,
        median: v,
        std: [0.1; 5],
        quantiles: QUANTILE_LEVELS
            .iter()
            .map(|q| [1.0, theta1 * (0.9 + *q as f64 / 500.0), 10.0, 90.0, theta3])
            .collect(),
        iat: 50.0,
        iat_per_param: 10.0,
        rmse_at_map: 3.0,
    };
    SummaryFile::new(id, category, &s, 10_000, 1_000, 0)
}

fn two_clusters() -> Vec<SummaryFile> {
    let mut v = Vec::new();
    for k in 0..5 {
        let d = k as f64 * 0.4;
        v.push(summary_file(
            &format!("h{k}"),
            Category::Healthy,
            12.0 + d,
            9.0 + d,
        ));
        v.push(summary_file(
            &format!("f{k}"),
            Category::Ifg,
            11.0 + d,
            10.0 - d,
        ));
        v.push(summary_file(
            &format!("i{k}"),
            Category::Igt,
            2.0 + 0.2 * d,
            1.5 + 0.1 * d,
        ));
        v.push(summary_file(
            &format!("t{k}"),
            Category::T2d,
            1.2 + 0.1 * d,
            1.0 + 0.1 * d,
        ));
    }
    v
}

#[test]
fn classify_two_clusters_and_flags() {
    let mut cohort = two_clusters();
    // an IGT patient sitting in the healthy cluster
    cohort.push(summary_file("odd", Category::Igt, 13.0, 10.0));
    let (model, patients) = classify_summaries(cohort, 1.0, &QUANTILE_LEVELS).unwrap();
    assert_eq!(model.hyperplanes.len(), 9);
    for p in &patients {
        let healthy_cluster = p.summary.id.starts_with('h') || p.summary.id.starts_with('f');
        if healthy_cluster {
            assert_eq!(p.prediction.class, Class::Healthy, "{}", p.summary.id);
        }
        assert_eq!(p.possible_misclassification(), p.summary.id == "odd");
    }
    let report = report_csv(&model, &patients);
    let odd = report.lines().find(|l| l.starts_with("odd,")).unwrap();
    assert!(odd.starts_with("odd,IGT,"));
    assert!(odd.contains(",healthy,false,true,"));
}

#[test]
fn classify_single_class_fails() {
    let dir = tempfile::tempdir().unwrap();
    for s in two_clusters()
        .into_iter()
        .filter(|s| s.category.class() == Class::Healthy)
    {
        s.write(&dir.path().join(format!("{}.summary.json", s.id)))
            .unwrap();
    }
    let out = dir.path().join("out");
    let o = ogtt(&[
        "classify",
        "--input",
        dir.path().to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("impaired"));
}

#[test]
fn classify_reads_written_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let cohort = two_clusters();
    for s in &cohort {
        s.write(&dir.path().join(format!("{}.summary.json", s.id)))
            .unwrap();
    }
    assert_eq!(read_summaries(dir.path()).unwrap().len(), cohort.len());
    let out = dir.path().join("out");
    let o = ogtt(&[
        "classify",
        "--input",
        dir.path().to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("classification.csv").exists() && out.join("hyperplanes.json").exists());
    let o = ogtt(&[
        "classify",
        "--input",
        out.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
}

#[test]
fn verify_passes_and_reports() {
    let checks = run_checks(&VerifyOptions::default());
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    let moved = checks
        .iter()
        .find(|c| c.name.contains("theta0 or theta1"))
        .unwrap();
    assert!(moved.value > 0.0);
    let sweep = checks
        .iter()
        .find(|c| c.name.contains("sign sweep"))
        .unwrap();
    assert!(sweep.detail.contains("sign change between theta1 = 2.2"));
    let o = ogtt(&["verify", "--draws", "50"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn partial_error_code() {
    assert_eq!(
        CliError::Partial {
            failed: 1,
            total: 3
        }
        .exit_code(),
        1
    );
    assert_eq!(CliError::Config("x".into()).exit_code(), 2);
}
