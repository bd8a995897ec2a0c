use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

fn lab(args: &[&str], out: &Path) -> Output {
    lab_env(args, out, None)
}

fn lab_env(args: &[&str], out: &Path, threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_maryland-lab"));
    cmd.args(args).arg("--out").arg(out).env_remove("MARYLAND_LAB_THREADS");
    if let Some(t) = threads {
        cmd.env("MARYLAND_LAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn summary(dir: &Path) -> Value {
    read_json(&dir.join("summary.json"))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn missing_k_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let o = lab(&["qklr", "--tau", "1"], tmp.path());
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let conf = tmp.path().join("bad.conf");
    fs::write(&conf, "k = 1\nplanck = 2\n").unwrap();
    let o = lab(&["qklr", "--config", conf.to_str().unwrap()], &tmp.path().join("out"));
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("planck"));
}

#[test]
fn verify_defaults_pass() {
    let tmp = TempDir::new().unwrap();
    let o = lab(&["verify"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let report = read_json(&tmp.path().join("verify_report.json"));
    assert_eq!(report["passed"], true);
    assert!(report["failed"].as_array().unwrap().is_empty());
    assert_eq!(report["checks"].as_array().unwrap().len(), 18);
    assert!(tmp.path().join("verify.csv").exists());
}

#[test]
fn impossible_tolerance_fails_checks() {
    let tmp = TempDir::new().unwrap();
    let o = lab(&["verify", "--tolerance", "1e-20"], tmp.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn small_lattice_reports_truncation() {
    let tmp = TempDir::new().unwrap();
    let o = lab(&["verify", "--dim", "16", "--k", "30"], tmp.path());
    assert_eq!(code(&o), 1);
    let report = fs::read_to_string(tmp.path().join("verify_report.json")).unwrap();
    assert!(report.contains("dimension-too-small"));
}

#[test]
fn rational_tau_returns_after_q_kicks() {
    let tmp = TempDir::new().unwrap();
    let o = lab(&["qklr", "--k", "0.7", "--p", "1", "--q", "3"], tmp.path());
    assert_eq!(code(&o), 0);
    let s = summary(tmp.path());
    assert!((s["final_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((s["periodicity"]["fidelity_after_q_kicks"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(s["config"]["kicks"], 3);
}

#[test]
fn resonance_energy_grows_quadratically() {
    let tmp = TempDir::new().unwrap();
    let k = 0.5;
    let tau = (2.0 * PI).to_string();
    let o = lab(&["qklr", "--k", "0.5", "--tau", &tau, "--kicks", "6", "--window", "30"], tmp.path());
    assert_eq!(code(&o), 0);
    let s = summary(tmp.path());
    assert_eq!(s["resonant"], true);
    for row in s["per_kick"].as_array().unwrap() {
        let n = row["kicks"].as_f64().unwrap();
        let p2 = row["p2_mean"].as_f64().unwrap();
        let expected = (n * k) * (n * k) / 2.0;
        assert!((p2 - expected).abs() < 1e-8 * expected.max(1.0), "n = {n}: {p2} vs {expected}");
    }
}

#[test]
fn dunlap_localizes_at_bessel_zero() {
    let tmp = TempDir::new().unwrap();
    let e = J0_FIRST_ZERO.to_string();
    let o = lab(&["dunlap", "--T", "0.5", "--E", &e, "--periods", "4"], tmp.path());
    assert_eq!(code(&o), 0);
    let s = summary(tmp.path());
    assert_eq!(s["localized"], true);
    for row in s["per_period"].as_array().unwrap() {
        assert!(row["msd"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn dunlap_zero_field_matches_free_spreading() {
    let tmp = TempDir::new().unwrap();
    let t = 0.5;
    let o = lab(&["dunlap", "--T", "0.5", "--E", "0", "--periods", "3"], tmp.path());
    assert_eq!(code(&o), 0);
    let s = summary(tmp.path());
    for row in s["per_period"].as_array().unwrap() {
        let n = row["periods"].as_f64().unwrap();
        let expected = 8.0 * PI * PI * n * n * t * t;
        assert!((row["msd"].as_f64().unwrap() - expected).abs() < 1e-9 * expected);
    }
}

#[test]
fn scan_finds_three_roots() {
    let tmp = TempDir::new().unwrap();
    let o = lab(&["scan", "--scan-lo", "0", "--scan-hi", "10", "--scan-points", "101"], tmp.path());
    assert_eq!(code(&o), 0);
    let s = summary(tmp.path());
    let roots: Vec<f64> = s["roots"].as_array().unwrap().iter().map(|r| r.as_f64().unwrap()).collect();
    assert_eq!(roots.len(), 3);
    assert!((roots[0] - J0_FIRST_ZERO).abs() < 1e-8);
}

#[test]
fn csv_headers_carry_units_and_summary_embeds_config() {
    let tmp = TempDir::new().unwrap();
    let o = lab(&["dunlap", "--T", "1", "--E", "1"], tmp.path());
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(tmp.path().join("msd.csv")).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.split(',').all(|h| h.contains('[') && h.ends_with(']')), "{header}");
    let s = summary(tmp.path());
    assert_eq!(s["config"]["T"], 1.0);
    assert_eq!(s["config"]["E"], 1.0);
    assert_eq!(s["config"]["periods"], 10);
}

#[test]
fn json_format_writes_tables_as_json() {
    let tmp = TempDir::new().unwrap();
    let o = lab(&["qklr", "--k", "1", "--tau", "1", "--kicks", "2", "--format", "json"], tmp.path());
    assert_eq!(code(&o), 0);
    assert!(!tmp.path().join("energy.csv").exists());
    let table = read_json(&tmp.path().join("energy.json"));
    assert_eq!(table["columns"].as_array().unwrap().len(), 3);
    assert_eq!(table["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn flags_override_config_file() {
    let tmp = TempDir::new().unwrap();
    let conf = tmp.path().join("run.conf");
    fs::write(&conf, "k = 1\ntau = 1\nkicks = 5\n").unwrap();
    let out = tmp.path().join("out");
    let o = lab(&["qklr", "--config", conf.to_str().unwrap(), "--kicks", "2"], &out);
    assert_eq!(code(&o), 0);
    let s = summary(&out);
    assert_eq!(s["config"]["kicks"], 2);
    assert_eq!(s["config"]["k"], 1.0);
}

#[test]
fn thread_count_does_not_change_output() {
    let one = TempDir::new().unwrap();
    let many = TempDir::new().unwrap();
    let args = ["scan", "--scan-points", "64", "--periods", "2"];
    assert_eq!(code(&lab_env(&args, one.path(), Some("1"))), 0);
    assert_eq!(code(&lab_env(&args, many.path(), Some("4"))), 0);
    for file in ["scan.csv", "roots.csv"] {
        assert_eq!(
            fs::read(one.path().join(file)).unwrap(),
            fs::read(many.path().join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn invalid_thread_count_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let o = lab_env(&["scan"], tmp.path(), Some("zero"));
    assert_eq!(code(&o), 2);
}
