//! End-to-end tests of the `bcn-duality` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bcn-duality"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn bcn-duality")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn verify_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"seed": 7, "cases": 3}"#);
    let a = run(&["--config", &cfg, "verify"]);
    assert_eq!(a.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    let doc = json_of(&a);
    assert_eq!(doc["all_pass"], Value::Bool(true));
    assert!(!doc["checks"].as_array().unwrap().is_empty());
    let b = run(&["--config", &cfg, "verify"]);
    assert_eq!(a.stdout, b.stdout, "same seed must give byte-identical output");
}

#[test]
fn impossible_tolerance_fails_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"cases": 2, "tolerances": {"round_trip": 1e-30}}"#);
    let out = run(&["--config", &cfg, "verify"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    let row = doc["checks"].as_array().unwrap().iter().find(|r| r["name"] == "round_trip").unwrap().clone();
    assert_eq!(row["pass"], Value::Bool(false));
}

#[test]
fn invalid_configuration_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    for body in [
        r#"{"params": {"n": 0, "mu": 0.5, "u": -1.0, "v": 0.3}}"#,
        r#"{"params": {"n": 2, "mu": -1.0, "u": -1.0, "v": 0.3}}"#,
        r#"{"unknown_key": 1}"#,
        "not json",
    ] {
        let cfg = write_config(dir.path(), body);
        let out = run(&["--config", &cfg, "spectrum"]);
        assert_eq!(out.status.code(), Some(2), "config {body}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(run(&["--config", "/nonexistent/run.json", "spectrum"]).status.code(), Some(2));
    assert_eq!(run(&["flow", "--hamiltonian", "X", "--out", "/dev/null"]).status.code(), Some(2));
}

#[test]
fn triple_at_origin() {
    let out = run(&["triple", "--zeta", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert!(doc["max_residual"].as_f64().unwrap() <= 1e-10);
    let lambda: Vec<f64> = serde_json::from_value(doc["triple"]["lambda"].clone()).unwrap();
    // the origin maps to the vertex (μ + 1, 1) for the default parameters
    assert!((lambda[0] - 1.5).abs() < 1e-14 && (lambda[1] - 1.0).abs() < 1e-14, "{lambda:?}");
}

#[test]
fn flow_writes_csv_with_increasing_times() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = run(&["flow", "--hamiltonian", "H", "--t1", "0.2", "--dt", "0.01", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    assert!(doc["summary"]["energy_drift_per_time"].as_f64().unwrap().abs() < 1e-8);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "t");
    let mut last = f64::NEG_INFINITY;
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), header.len());
        let t: f64 = fields[0].parse().unwrap();
        assert!(t > last);
        last = t;
        rows += 1;
    }
    assert!(rows > 2);
    assert!((last - 0.2).abs() < 1e-12);
}

#[test]
fn action_flow_accepts_zeta_init() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("act.csv");
    let args = ["flow", "--hamiltonian", "action:1", "--init", "0.3+0.1i,-0.2i", "--t1", "0.5", "--dt", "0.1"];
    let out = bin().args(args).args(["--out", csv.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&csv).unwrap().lines().count() >= 6);
}

#[test]
fn duality_report_is_consistent() {
    let out = run(&["duality", "--zeta", "0.4-0.1i,0.2+0.3i"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    assert!(doc["max_residual"].as_f64().unwrap() <= 1e-10);
    // positions from the moduli: λ_2 = 1 + |ζ_2|², λ_1 = λ_2 + μ + |ζ_1|²
    let lambda: Vec<f64> = serde_json::from_value(doc["lambda"].clone()).unwrap();
    assert!((lambda[1] - 1.13).abs() < 1e-14 && (lambda[0] - 1.8).abs() < 1e-14, "{lambda:?}");
    let hat: Vec<f64> = serde_json::from_value(doc["hat_lambda"].clone()).unwrap();
    assert!(hat[0] > hat[1] && hat[0] < 0.0);
}

#[test]
fn vdlimit_error_decreases() {
    let out = run(&["vdlimit", "--a=-6,-12", "--b=6,12"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc = json_of(&out);
    let table = doc["table"].as_array().unwrap();
    assert_eq!(table.len(), 4);
    let err = |a: f64, b: f64| {
        table.iter().find(|r| r["a"].as_f64() == Some(a) && r["b"].as_f64() == Some(b)).unwrap()["abs_error"]
            .as_f64()
            .unwrap()
    };
    assert!(err(-12.0, 12.0) < err(-6.0, 6.0));
}

#[test]
fn spectrum_ground_state() {
    let out = run(&["spectrum", "--j", "2", "--max-occupation", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["occupations"], serde_json::json!([0, 0]));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
