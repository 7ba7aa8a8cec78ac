use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mpskit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpskit")).args(args).current_dir(dir).output().unwrap()
}

fn report(dir: &Path, args: &[&str]) -> Value {
    let out = mpskit(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn ghz_entropy_per_bond() {
    let dir = tempfile::tempdir().unwrap();
    report(dir.path(), &["state", "preset", "--kind", "ghz", "--n", "4", "--out", "ghz4.qstate"]);
    let r = report(dir.path(), &["mps", "entropy", "--in", "ghz4.qstate"]);
    assert_eq!(r["version"], mpskit::VERSION);
    for bond in r["result"]["bonds"].as_array().unwrap() {
        assert_eq!(bond["chi"], 2);
        assert!((bond["entropy"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
    }
    let bits = report(dir.path(), &["mps", "entropy", "--in", "ghz4.qstate", "--units", "bits"]);
    assert!((bits["result"]["bonds"][0]["entropy"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(bits["units"], "bits");
}

#[test]
fn laughlin_verify_four() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(dir.path(), &["laughlin", "verify", "--n", "4"]);
    let res = &r["result"];
    let (m, f) = (res["entropy_measured"].as_f64().unwrap(), res["entropy_formula"].as_f64().unwrap());
    assert!((m - 6f64.ln()).abs() < 1e-8 && (f - 6f64.ln()).abs() < 1e-12);
    assert_eq!(res["apparent_dof"], 256);
    assert_eq!(res["mps_params"], 4 * 4 * 16);
    assert_eq!(r["config"]["n"], 4);
}

#[test]
fn ising_fit_reports_central_charge() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(dir.path(), &["ising", "fit", "--n", "16", "--h", "1", "--boundary", "periodic"]);
    let c = r["result"]["fitted_c"].as_f64().unwrap();
    assert!((0.4..=0.6).contains(&c));
    assert_eq!(r["seed"], r["config"]["seed"]);
    assert!(r["result"].get("entries").is_none());
}

#[test]
fn ising_scan_writes_csv_table() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(dir.path(), &["ising", "scan", "--n", "8", "--csv", "t.csv", "--report", "r.json"]);
    assert_eq!(r["result"]["entries"].as_array().unwrap().len(), 7);
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "l,S_l,chi_required,chord");
    assert_eq!(lines.len(), 8);
    let saved: Value = serde_json::from_slice(&std::fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(saved, r);
}

#[test]
fn decompose_truncate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    report(dir.path(), &["state", "random", "--n", "6", "--seed", "1", "--out", "s.qstate"]);
    let exact = report(dir.path(), &["mps", "decompose", "--in", "s.qstate", "--out", "s.qmps"]);
    assert_eq!(exact["result"]["bond_dims"], serde_json::json!([2, 4, 8, 4, 2]));
    assert!(exact["result"]["fidelity"].as_f64().unwrap() > 1.0 - 1e-10);
    let t = report(dir.path(), &["mps", "truncate", "--in", "s.qmps", "--chi", "2", "--out", "t.qmps"]);
    assert_eq!(t["result"]["bond_dims"], serde_json::json!([2, 2, 2, 2, 2]));
    assert!(t["result"]["truncation_error"].as_f64().unwrap() > 0.0);
    let capped = report(dir.path(), &["mps", "decompose", "--in", "s.qstate", "--chi", "3", "--out", "c.qmps"]);
    assert!(capped["result"]["fidelity"].as_f64().unwrap() < 1.0);
}

#[test]
fn image_commands() {
    let dir = tempfile::tempdir().unwrap();
    report(dir.path(), &["image", "random", "--width", "16", "--height", "16", "--seed", "2", "--out", "a.pgm"]);
    let r = report(dir.path(), &["image", "roundtrip", "--in", "a.pgm", "--out", "b.pgm", "--format", "p2"]);
    assert_eq!(r["result"]["pixels_match"], true);
    assert_eq!(r["result"]["psnr"], Value::Null);
    let c = report(
        dir.path(),
        &["image", "compress", "--chi", "2", "--in", "a.pgm", "--out", "c.pgm", "--report", "c.json"],
    );
    assert!(c["result"]["psnr"].as_f64().unwrap() > 0.0);
    assert!(c["result"]["params_stored"].as_u64().unwrap() < c["result"]["params_raw"].as_u64().unwrap());
    assert!(dir.path().join("c.json").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mpskit(dir.path(), &["mps", "entropy", "--bogus"]).status.code(), Some(2));
    assert_eq!(mpskit(dir.path(), &["laughlin", "verify", "--n", "3"]).status.code(), Some(2));
    assert_eq!(mpskit(dir.path(), &["laughlin", "verify", "--n", "16"]).status.code(), Some(3));
    assert_eq!(mpskit(dir.path(), &["ising", "scan", "--n", "23"]).status.code(), Some(3));
    assert_eq!(
        mpskit(dir.path(), &["ising", "fit", "--n", "12", "--max-iter", "3", "--tol", "1e-15"]).status.code(),
        Some(3)
    );
    std::fs::write(dir.path().join("bad.qmps"), "QMPS 1\n2 2\n").unwrap();
    assert_eq!(
        mpskit(dir.path(), &["mps", "truncate", "--in", "bad.qmps", "--chi", "1", "--out", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mpskit(dir.path(), &["state", "preset", "--kind", "maxent", "--n", "3", "--out", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(mpskit(dir.path(), &["--help"]).status.code(), Some(0));
}
