use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lobsim::cli::CONFIG_KEYS;
use serde_json::Value;

fn lobsim(args: &[&str], out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lobsim"));
    cmd.args(args).env_remove("LOBSIM_OUTPUT_DIR");
    if let Some(dir) = out {
        cmd.arg("--output").arg(dir);
    }
    cmd.output().unwrap()
}

fn metrics(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("metrics.json")).unwrap()).unwrap()
}

fn csv_probability(dir: &Path, file: &str, pattern: &str) -> f64 {
    let text = fs::read_to_string(dir.join(file)).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{pattern},")))
        .map(|p| p.parse().unwrap())
        .unwrap_or(0.0)
}

#[test]
fn help_matches_golden_file() {
    let out = lobsim(&["--help"], None);
    assert!(out.status.success());
    let help = String::from_utf8(out.stdout).unwrap();
    let golden = include_str!("golden/help.txt");
    assert_eq!(help, golden);
    for key in CONFIG_KEYS {
        assert!(help.contains(key), "help does not mention {key}");
    }
}

#[test]
fn bsm_phi_minus_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = lobsim(
        &["bsm", "--scheme", "symmetric", "--input", "phi-"],
        Some(dir.path()),
    );
    assert!(out.status.success());
    assert!((csv_probability(dir.path(), "outcomes.csv", "D1+D4") - 0.5).abs() < 1e-10);
    assert!((csv_probability(dir.path(), "outcomes.csv", "D2+D3") - 0.5).abs() < 1e-10);
    let m = metrics(dir.path());
    assert_eq!(m["schema_version"], 1);
    assert!(m["qber"].as_f64().unwrap().abs() < 1e-12);
    assert!(dir.path().join("circuit.json").exists());
}

#[test]
fn hom_scan_psi_minus_peak() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "hom-scan",
        "--input",
        "psi-",
        "--class",
        "D11",
        "--lc",
        "0.085",
        "--delays",
        "-0.4:0.4:81",
    ];
    let out = lobsim(&args, Some(dir.path()));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = &metrics(dir.path())["visibilities"][0];
    assert_eq!(v["class"], "D11");
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    let rows = fs::read_to_string(dir.path().join("hom_scan.csv")).unwrap();
    assert_eq!(rows.lines().filter(|l| l.contains(",D11,")).count(), 81);
}

#[test]
fn prepare_with_exact_tomography() {
    let dir = tempfile::tempdir().unwrap();
    let out = lobsim(
        &[
            "prepare",
            "--input",
            "DD",
            "--gamma",
            "1.0",
            "--tomography",
            "--shots",
            "0",
        ],
        Some(dir.path()),
    );
    assert!(out.status.success());
    let m = metrics(dir.path());
    assert!((m["heralding_probability"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert!((m["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((m["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((m["tomography"]["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(m["target"], "phi+");
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "tomography",
        "--input",
        "DA",
        "--gamma",
        "0.9",
        "--shots",
        "200",
        "--seed",
        "5",
    ];
    assert!(lobsim(&args, Some(a.path())).status.success());
    assert!(lobsim(&args, Some(b.path())).status.success());
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 5);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap()
        );
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"experiment": "bsm", "scheme": "standard", "input": "psi+", "format": "json"}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = lobsim(
        &["--config", cfg.to_str().unwrap(), "--input", "psi-"],
        Some(&out_dir),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let m = metrics(&out_dir);
    assert_eq!(m["input"], "psi-");
    assert_eq!(m["circuit"], "standard_bsm");
    assert!(out_dir.join("outcomes.json").exists());
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lobsim"))
        .args(["ghz", "--parties", "2"])
        .env("LOBSIM_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("metrics.json").exists());
}

fn assert_failure(args: &[&str], out: Option<&Path>, code: i32) {
    let o = lobsim(args, out);
    assert_eq!(o.status.code(), Some(code), "{args:?}");
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
}

#[test]
fn errors_exit_with_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_failure(&["bsm", "--input", "phi7"], Some(dir.path()), 2);
    assert_failure(&["ghz", "--parties", "1"], Some(dir.path()), 2);
    assert_failure(&["hom-scan", "--delays", "0:1"], Some(dir.path()), 2);
    assert_failure(&["bsm", "--scheme", "sideways"], Some(dir.path()), 2);
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"experiment": "bsm", "colour": "red"}"#).unwrap();
    assert_failure(&["--config", cfg.to_str().unwrap()], Some(dir.path()), 2);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    assert_failure(&["bsm"], Some(&blocker.join("sub")), 3);
    // nothing is written when validation fails
    assert!(!dir.path().join("metrics.json").exists());
}
