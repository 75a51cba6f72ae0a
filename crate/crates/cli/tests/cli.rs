use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn orbitcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitcount")).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, cmd: &str, extra: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut args = vec![cmd, "--out", out];
    args.extend_from_slice(extra);
    orbitcount(&args)
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().last().expect("error line")).expect("json error record")
}

#[test]
fn count_reports_are_byte_identical_across_runs_and_workers() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(run_in(a.path(), "count", &["--L", "7", "--workers", "1"]).status.success());
    assert!(run_in(b.path(), "count", &["--L", "7", "--workers", "2"]).status.success());
    for f in ["series.csv", "fit.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn series_and_fit_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), "primes", &["--L", "8", "--norm", "l1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("series.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,count,log_count"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 512);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0] && w[0][1] <= w[1][1]));
    let fit: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    let h = fit["h_hat"].as_f64().unwrap();
    assert!(h > 0.4 && h < 0.7, "{h}");
    assert_eq!(fit["truncation"]["kind"], "spectral_primitive");
    assert_eq!(fit["truncation"]["max_len"], 8);
    assert_eq!(fit["ratio_curve"].as_array().unwrap().len(), 32);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nrepresentation = sym_power:2\nL = 3\ndepth = 2\n").unwrap();
    let out = run_in(dir.path(), "entropy", &["--config", cfg.to_str().unwrap(), "--depth", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("entropy.json")).unwrap()).unwrap();
    assert_eq!(v["depth"], 3);
    // Sym² doubles every Cartan coordinate
    let h = v["h_pressure"].as_f64().unwrap();
    assert!((h - 0.5608 / 2.0).abs() < 0.01, "{h}");
    assert!(v["variation_k"].as_f64().unwrap() > 0.0);
}

#[test]
fn pairs_and_cone_formats() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), "equidist", &["--L", "6"]).status.success());
    let pairs = fs::read_to_string(dir.path().join("pairs.csv")).unwrap();
    assert_eq!(pairs.lines().next(), Some("cell_a,cell_b,count"));
    assert_eq!(pairs.lines().count(), 1 + 16);
    assert!(run_in(dir.path(), "limitcone", &["--representation", "sym_power:2", "--L", "4"]).status.success());
    let cone = fs::read_to_string(dir.path().join("cone.csv")).unwrap();
    assert_eq!(cone.lines().next(), Some("word_length,v1,v2,v3"));
    for line in cone.lines().skip(1) {
        let v: Vec<f64> = line.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(v[0] >= v[1] && v[1] >= v[2]);
    }
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for extra in [
        &["--representation", "hyperbolic_mystery"][..],
        &["--representation", "sym_power:0"],
        &["--L", "0"],
        &["--norm", "l7"],
        &["--percentile", "1.5"],
        &["--config", "/nonexistent/run.cfg"],
    ] {
        let out = run_in(dir.path(), "count", extra);
        assert_eq!(out.status.code(), Some(2), "{extra:?}");
        assert_eq!(error_record(&out)["exit_code"], 2);
    }
    let out = orbitcount(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn computation_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), "phi", &["--representation", "sym_power:2", "--phi", "-1,0,1", "--L", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["error"], "InteriorUncertified");

    let rep = dir.path().join("pair.rep");
    fs::write(&rep, "d 2\ngen a\n9 0\n0 1/9\ngen b\n5 4\n4 5\n").unwrap();
    let out = run_in(dir.path(), "entropy", &["--representation", rep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["error"], "NotCertified");
    // uncertified input still counts
    assert!(run_in(dir.path(), "count", &["--representation", rep.to_str().unwrap(), "--L", "5"]).status.success());
}

#[test]
fn verify_writes_a_table_and_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), "verify", &[]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = stdout.lines().filter(|l| l.starts_with("[PASS]") || l.starts_with("[FAIL]")).collect();
    assert_eq!(rows.len(), 10, "{stdout}");
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    let all = v["all_passed"].as_bool().unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    assert_eq!(out.status.code(), Some(if all { 0 } else { 4 }));
}
