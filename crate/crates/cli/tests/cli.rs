use std::f64::consts::FRAC_PI_2;
use std::path::Path;
use std::process::{Command, Output};

use nhqc_cli::record::{matrix_from_json, Outputs};
use nhqc_cli::{ResultRecord, RunConfig};
use nhqc_core::linalg::{frobenius_distance, ComplexMatrix, I, ONE};
use tempfile::TempDir;

fn nhqc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhqc"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn with_config(cmd: &str, toml: &str, extra: &[&str]) -> (TempDir, Output) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, toml).unwrap();
    let mut args = vec![cmd, "--config", cfg.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = nhqc(&args, dir.path());
    (dir, out)
}

fn record(dir: &Path, name: &str) -> ResultRecord {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn assert_ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    frobenius_distance(a, b).unwrap()
}

#[test]
fn gate_elementary_in_ebd_basis() {
    let (dir, out) = with_config("gate", &format!("[gate]\nkind = \"elementary\"\ntheta = {FRAC_PI_2}\n"), &[]);
    assert_ok(&out);
    let rec = record(dir.path(), "gate.json");
    assert_eq!(rec.command, "gate");
    assert_eq!(rec.timestamp, 1_700_000_000);
    let Outputs::Gate(g) = rec.outputs else { panic!("gate output expected") };
    let ebd = matrix_from_json(g.ideal_ebd.as_ref().unwrap()).unwrap();
    assert!(dist(&ebd, &ComplexMatrix::from_diagonal(&[-I, I, ONE])) < 1e-10);
    assert!(g.matches_target);
    assert!(g.fidelity.is_none());
}

#[test]
fn gate_composite4_at_half_pi_is_identity_on_qubit() {
    let (dir, out) = with_config("gate", &format!("[gate]\nkind = \"composite4\"\ntheta = {FRAC_PI_2}\nphi = 0.3\n"), &[]);
    assert_ok(&out);
    let Outputs::Gate(g) = record(dir.path(), "gate.json").outputs else { panic!() };
    let u = matrix_from_json(&g.ideal).unwrap();
    assert!(dist(&u, &ComplexMatrix::identity(3)) < 1e-10);
}

#[test]
fn gate_twoqubit_composite() {
    let toml = "[gate]\nkind = \"twoqubit_composite\"\njk = \"11\"\n\n[error]\neps_jk = 0.05\n";
    let (dir, out) = with_config("gate", toml, &[]);
    assert_ok(&out);
    let Outputs::Gate(g) = record(dir.path(), "gate.json").outputs else { panic!() };
    let target = ComplexMatrix::from_diagonal(&[ONE, ONE, ONE, -ONE, -ONE]);
    assert!(dist(&matrix_from_json(&g.ideal).unwrap(), &target) < 1e-10);
    assert_eq!(g.entangling, Some(true));
    let f = g.fidelity.unwrap();
    assert!(f.infidelity > 0.0 && f.infidelity < 1e-3);
    assert!(g.distance_to_ideal.unwrap() > 0.0);
}

#[test]
fn sweep_composite4_is_fourth_order() {
    let (dir, out) = with_config("sweep", "[sweep]\ngate_kind = \"composite4\"\nerror_mode = \"common\"\n", &[]);
    assert_ok(&out);
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "epsilon,infidelity");
    assert_eq!(lines.len(), 13);
    let Outputs::Sweep(s) = record(dir.path(), "sweep.json").outputs else { panic!() };
    assert!((s.fit.slope - 4.0).abs() < 0.2, "{}", s.fit.slope);
    assert!(s.fit.r_squared >= 0.999);
}

#[test]
fn sweep_single_is_second_order() {
    let (dir, out) = with_config("sweep", "[sweep]\ngate_kind = \"single\"\nerror_mode = \"common\"\n", &[]);
    assert_ok(&out);
    let Outputs::Sweep(s) = record(dir.path(), "sweep.json").outputs else { panic!() };
    assert!((s.fit.slope - 2.0).abs() < 0.1, "{}", s.fit.slope);
}

#[test]
fn sweep_csv_is_sorted_and_parseable() {
    let (dir, out) = with_config("sweep", "[sweep]\nepsilons = [0.03, 0.001, 0.01]\n", &[]);
    // unsorted grid is a validation error
    assert_eq!(out.status.code(), Some(2));
    let (dir2, out) = with_config("sweep", "[sweep]\nepsilons = [0.001, 0.01, 0.03]\n", &[]);
    assert_ok(&out);
    let mut rdr = csv::Reader::from_path(dir2.path().join("sweep.csv")).unwrap();
    let eps: Vec<f64> = rdr.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
    assert_eq!(eps, vec![0.001, 0.01, 0.03]);
    drop(dir);
}

#[test]
fn sweep_with_empty_grid_exits_2() {
    let (_dir, out) = with_config("sweep", "[sweep]\nepsilons = []\n", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn holonomy_elementary_passes() {
    let (dir, out) = with_config("check-holonomy", "[holonomy]\nschedule = \"elementary\"\n", &[]);
    assert_ok(&out);
    let Outputs::Holonomy(h) = record(dir.path(), "holonomy.json").outputs else { panic!() };
    assert!(h.report.passed);
    assert!((h.midpoint_distance.unwrap() - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn holonomy_composites_pass_per_loop() {
    let (dir, out) = with_config("check-holonomy", "[holonomy]\nschedule = \"composite4\"\ntheta = 1.0\n", &[]);
    assert_ok(&out);
    let Outputs::Holonomy(h) = record(dir.path(), "holonomy.json").outputs else { panic!() };
    assert!(h.report.passed);
    assert_eq!(h.per_loop.len(), 4);
    assert!(h.per_loop.iter().all(|r| r.passed));
}

#[test]
fn holonomy_truncated_fails() {
    let (dir, out) = with_config("check-holonomy", "[holonomy]\nschedule = \"truncated\"\n", &[]);
    assert_ok(&out);
    let Outputs::Holonomy(h) = record(dir.path(), "holonomy.json").outputs else { panic!() };
    assert!(!h.report.passed);
    assert!((h.report.cond1_residual - 1.0).abs() < 1e-9);
}

#[test]
fn holonomy_tiny_tolerance_fails_with_residuals() {
    let (dir, out) = with_config("check-holonomy", "", &["--tolerance", "1e-30"]);
    assert_ok(&out);
    let Outputs::Holonomy(h) = record(dir.path(), "holonomy.json").outputs else { panic!() };
    assert!(!h.report.passed);
    assert_eq!(h.report.tolerance, 1e-30);
    assert!(h.report.cond1_residual < 1e-8);
}

#[test]
fn dfs_examples() {
    let (dir, out) = with_config("dfs", "[dfs]\nkappas = [0.0, 0.5]\nn_samples = 400\n", &["--seed", "3"]);
    assert_ok(&out);
    let mut rdr = csv::Reader::from_path(dir.path().join("dfs.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["kappa", "encoded_fidelity", "unencoded_fidelity"]);
    let rows: Vec<[f64; 3]> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            [0, 1, 2].map(|k| r[k].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((rows[0][1] - 1.0).abs() < 1e-12 && (rows[0][2] - 1.0).abs() < 1e-12);
    assert!((rows[1][1] - 1.0).abs() < 1e-12);
    assert!(rows[1][2] < 1.0);
    let Outputs::Dfs(d) = record(dir.path(), "dfs.json").outputs else { panic!() };
    assert_eq!(d.seed, 3);
}

#[test]
fn dfs_without_seed_exits_2() {
    let (_dir, out) = with_config("dfs", "", &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dfs_csv_is_byte_identical_across_runs() {
    let (a, out) = with_config("dfs", "[dfs]\nn_samples = 200\nseed = 9\n", &[]);
    assert_ok(&out);
    let (b, out) = with_config("dfs", "[dfs]\nn_samples = 200\nseed = 9\n", &[]);
    assert_ok(&out);
    let read = |d: &TempDir| std::fs::read(d.path().join("dfs.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    // the record is identical too once the timestamp is pinned
    let json = |d: &TempDir| std::fs::read(d.path().join("dfs.json")).unwrap();
    assert_eq!(json(&a), json(&b));
}

#[test]
fn malformed_config_exits_2() {
    for bad in ["[gate]\nthetta = 1.0\n", "[gate]\nkind = \"triple\"\n", "not toml at all ["] {
        let (_dir, out) = with_config("gate", bad, &[]);
        assert_eq!(out.status.code(), Some(2), "{bad}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}

#[test]
fn missing_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = nhqc(&["gate", "--config", "/nonexistent/run.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_round_trip_is_idempotent() {
    let text = "[gate]\nkind = \"composite2\"\ntheta = 0.9\n\n[error]\neps0 = 0.01\n\n[dfs]\nseed = 4\nkappas = [0.1]\n";
    let cfg = RunConfig::parse(text).unwrap();
    let canonical = cfg.to_toml().unwrap();
    let again = RunConfig::parse(&canonical).unwrap();
    assert_eq!(again, cfg);
    assert_eq!(again.to_toml().unwrap(), canonical);
}

#[test]
fn record_round_trips_losslessly() {
    let toml = "[gate]\nkind = \"composite4\"\ntheta = 0.7\nphi = 1.3\n\n[error]\neps0 = 0.02\neps1 = -0.01\n";
    let (dir, out) = with_config("gate", toml, &[]);
    assert_ok(&out);
    let text = std::fs::read_to_string(dir.path().join("gate.json")).unwrap();
    let rec: ResultRecord = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&rec).unwrap() + "\n";
    assert_eq!(again, text);
    assert_eq!(serde_json::from_str::<ResultRecord>(&again).unwrap(), rec);
}
