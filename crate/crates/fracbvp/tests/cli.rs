//! End-to-end tests of the `fracbvp` binary: file formats, verify round trip,
//! convergence and crosscheck commands, tolerance override.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fracbvp")
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fracbvp-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&std::ffi::OsStr]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

const CONSERV_RLN: &str = r#"{
    "form": "conservative_caputo", "bc": "riemann_liouville",
    "beta": 0.5, "a0": 0.3, "a1": 1.3, "n": 128,
    "f": {"kind": "powersum", "terms": [{"coef": -1.0, "exponent": 0.0, "side": "left"}]}
}"#;

const CONSERV_CBC: &str = r#"{
    "form": "conservative_caputo", "bc": "caputo",
    "beta": 0.5, "a0": 0.0, "a1": 1.0, "n": 64,
    "f": {"kind": "powersum", "terms": [{"coef": -1.0, "exponent": 0.0, "side": "left"}]}
}"#;

#[test]
fn solve_then_verify_round_trip() {
    let dir = scratch("verify");
    let spec = write_spec(&dir, "spec.json", CONSERV_RLN);
    let out = dir.join("out");

    let solve = run(&["solve".as_ref(), "--spec".as_ref(), spec.as_os_str(), "--out".as_ref(), out.as_os_str()]);
    assert_eq!(solve.status.code(), Some(0), "{}", String::from_utf8_lossy(&solve.stderr));
    assert!(out.join("solution.csv").is_file());
    assert!(out.join("report.json").is_file());

    let verify = run(&["verify".as_ref(), "--spec".as_ref(), spec.as_os_str(), "--out".as_ref(), out.as_os_str()]);
    assert_eq!(verify.status.code(), Some(0), "{}", String::from_utf8_lossy(&verify.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["consistent"], true);
    assert!(report["max_abs_difference"].as_f64().unwrap() <= 1e-12);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_round_trip_survives_grid_solutions() {
    let dir = scratch("verify-grid");
    // Sampled source forces the grid pipeline into report.json.
    let n = 64;
    let values: Vec<String> = (0..=n).map(|_| "-1.0".to_string()).collect();
    let body = format!(
        r#"{{"form": "conservative_caputo", "bc": "caputo", "beta": 0.5,
             "a0": 0.0, "a1": 1.0, "n": {n},
             "f": {{"kind": "samples", "values": [{}]}}}}"#,
        values.join(",")
    );
    let spec = write_spec(&dir, "spec.json", &body);
    let out = dir.join("out");
    let solve = run(&["solve".as_ref(), "--spec".as_ref(), spec.as_os_str(), "--out".as_ref(), out.as_os_str()]);
    assert_eq!(solve.status.code(), Some(0), "{}", String::from_utf8_lossy(&solve.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["solution"]["kind"], "grid");

    let verify = run(&["verify".as_ref(), "--spec".as_ref(), spec.as_os_str(), "--out".as_ref(), out.as_os_str()]);
    assert_eq!(verify.status.code(), Some(0));
    let vr: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("verify.json")).unwrap()).unwrap();
    assert_eq!(vr["consistent"], true);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn classify_reports_constraint_residual() {
    let dir = scratch("classify");
    let spec = write_spec(&dir, "spec.json", CONSERV_RLN);
    let out = run(&["classify".as_ref(), "--spec".as_ref(), spec.as_os_str()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"]["status"], "unique_solution");
    assert_eq!(v["verdict"]["constraint_kind"], "plain_integral");
    assert!(v["verdict"]["constraint_residual"].as_f64().unwrap().abs() <= 1e-12);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn table_counts_five_well_posed_cells() {
    let out = run(&["table".as_ref()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["well_posed_count"], 5);
    assert_eq!(v["cells"].as_array().unwrap().len(), 9);
    std::fs::remove_dir_all(std::env::temp_dir().join("nonexistent")).ok();
}

#[test]
fn convergence_table_shrinks_residuals() {
    let dir = scratch("conv");
    let spec = write_spec(&dir, "spec.json", CONSERV_CBC);
    let out = run(&[
        "convergence".as_ref(),
        "--spec".as_ref(),
        spec.as_os_str(),
        "--n-list".as_ref(),
        "32,64,128".as_ref(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let errs: Vec<f64> = rows
        .iter()
        .map(|r| r["sup_error_vs_exact"].as_f64().unwrap())
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "errors not decreasing: {errs:?}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn crosscheck_gap_shrinks() {
    let dir = scratch("xcheck");
    let spec = write_spec(&dir, "spec.json", CONSERV_CBC);
    let out = run(&[
        "crosscheck".as_ref(),
        "--spec".as_ref(),
        spec.as_os_str(),
        "--n-list".as_ref(),
        "32,64,128".as_ref(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let gaps: Vec<f64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["sup_distance"].as_f64().unwrap())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "gaps not decreasing: {gaps:?}");

    // Crosscheck is specific to the conservative-Caputo/Caputo cell.
    let other = write_spec(&dir, "other.json", CONSERV_RLN);
    let bad = run(&["crosscheck".as_ref(), "--spec".as_ref(), other.as_os_str()]);
    assert_eq!(bad.status.code(), Some(4));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn tolerance_env_loosens_the_gate() {
    let dir = scratch("tol");
    // Violates the plain constraint by 1e-3.
    let body = r#"{
        "form": "conservative_caputo", "bc": "caputo",
        "beta": 0.5, "a0": 0.0, "a1": 1.001, "n": 64,
        "f": {"kind": "powersum", "terms": [{"coef": -1.0, "exponent": 0.0, "side": "left"}]}
    }"#;
    let spec = write_spec(&dir, "spec.json", body);
    let out_dir = dir.join("out");
    let strict = run(&["solve".as_ref(), "--spec".as_ref(), spec.as_os_str(), "--out".as_ref(), out_dir.as_os_str()]);
    assert_eq!(strict.status.code(), Some(3));

    let loose = Command::new(bin())
        .args(["solve", "--spec"])
        .arg(&spec)
        .arg("--out")
        .arg(&out_dir)
        .env("FRACBVP_TOL", "1e-2")
        .output()
        .unwrap();
    assert_eq!(loose.status.code(), Some(0), "{}", String::from_utf8_lossy(&loose.stderr));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_4() {
    for args in [
        vec!["frobnicate"],
        vec!["solve"],
        vec!["solve", "--spec"],
        vec!["convergence", "--spec", "x.json", "--n-list", "128,64"],
    ] {
        let out = Command::new(bin()).args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(4), "args {args:?}");
        let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(err["error"]["kind"].is_string());
    }
}
