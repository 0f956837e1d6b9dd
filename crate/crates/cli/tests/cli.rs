use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lil(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lil")).args(args).arg("--out").arg(dir).output().unwrap()
}

fn rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).map(str::to_owned).collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn spectra_lists_the_circle_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = lil(dir.path(), &["spectra", "-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let table = rows(&dir.path().join("spectra.csv"));
    assert_eq!(table[0], "index,eigenvalue,mode");
    let lambdas: Vec<&str> = table[1..].iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert_eq!(lambdas, ["0", "1", "1", "4", "4"]);

    let out = lil(dir.path(), &["spectra", "-n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows(&dir.path().join("spectra.csv")).len(), 2);
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = lil(dir.path(), &["spectra", "--manifold", r#"{"kind":"klein"}"#]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"truncation": 3, "colour": "red"}"#).unwrap();
    let out = lil(dir.path(), &["spectra", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    let out = lil(dir.path(), &["green", "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("green.csv").exists());
}

#[test]
fn config_values_are_applied_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"manifold": {"kind": "sphere"}, "truncation": 8, "seed": 5}"#).unwrap();
    let out = lil(dir.path(), &["spectra", "--config", cfg.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("spectra.csv")).unwrap();
    assert!(text.starts_with("# lil 0.1.0 command=spectra config_sha256="));
    assert!(text.lines().next().unwrap().ends_with("seed=9"));
    assert_eq!(rows(&dir.path().join("spectra.csv")).len(), 10);
}

#[test]
fn green_rows_label_the_green_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let out = lil(dir.path(), &["green", "-n", "8192", "--alpha", "1,2", "--x", "0.3", "--y", "2.0"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&dir.path().join("green.csv"));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1].split(',').nth(1), Some("green kernel g"));
    assert_eq!(rows[2].split(',').nth(1), Some("g_alpha"));
    // g(x, y) = 2 Σ_k cos(k d) / (π k²) = (π² / 3 − π d + d² / 2) / π on the circle of length 2π
    let d: f64 = 1.7;
    let expect = (std::f64::consts::PI.powi(2) / 3.0 - std::f64::consts::PI * d + d * d / 2.0) / std::f64::consts::PI;
    let spectral: f64 = rows[1].split(',').nth(4).unwrap().parse().unwrap();
    assert!((spectral - expect).abs() < 1e-3, "{spectral} vs {expect}");
}

#[test]
fn characterize_decides_membership() {
    let dir = tempfile::tempdir().unwrap();
    let density = dir.path().join("g.json");
    fs::write(&density, r#"{"manifold": {"kind": "circle", "L": 6.283185307179586}, "coeffs": [{"n": 1, "c": 0.5}]}"#).unwrap();
    let out = lil(dir.path(), &["characterize", "--density", density.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&dir.path().join("characterize.json"));
    assert_eq!(v["report"]["verdict"], true);
    assert_eq!(v["ball_equivalence"]["agree"], true);

    fs::write(&density, r#"{"manifold": {"kind": "circle", "L": 6.283185307179586}, "coeffs": [{"n": 1, "c": 0.9}]}"#).unwrap();
    let out = lil(dir.path(), &["characterize", "--density", density.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&dir.path().join("characterize.json"))["report"]["verdict"], false);
}

#[test]
fn lil_writes_a_ratio_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = lil(dir.path(), &["lil", "--T", "500", "--seeds", "2", "--t0", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&dir.path().join("lil.csv"));
    assert_eq!(rows[0], "path,t,mu,running_max,ratio");
    let v = json(&dir.path().join("lil.json"));
    assert!((v["sigma"].as_f64().unwrap() - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-15);
    assert_eq!(v["paths"].as_array().unwrap().len(), 2);
}

#[test]
fn simulate_respects_the_step_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out = lil(dir.path(), &["simulate", "--T", "100", "--paths", "2", "--step-budget", "1000"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&dir.path().join("simulate.json"))["partial"], true);
}

#[test]
fn chase_rejects_targets_outside_the_ball() {
    let dir = tempfile::tempdir().unwrap();
    let out = lil(dir.path(), &["chase", "--target", "0.6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["cluster", "--T", "300", "--seeds", "2", "--seed", "3"];
    assert_eq!(lil(a.path(), &args).status.code(), Some(0));
    assert_eq!(lil(b.path(), &args).status.code(), Some(0));
    for name in ["cluster.csv", "cluster.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
    let other = tempfile::tempdir().unwrap();
    lil(other.path(), &["cluster", "--T", "300", "--seeds", "2", "--seed", "4"]);
    assert_ne!(fs::read(a.path().join("cluster.csv")).unwrap(), fs::read(other.path().join("cluster.csv")).unwrap());
}
