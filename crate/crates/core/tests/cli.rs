use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sumprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumprod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn stats_on_singleton() {
    let out = sumprod(&["stats", "--family", "ap,1,7,1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["command"], "stats");
    assert_eq!(v["schema_version"], "1");
    assert!(v.get("timing").is_none());
    for (k, size) in v["results"]["sizes"].as_object().unwrap() {
        assert_eq!(size, 1, "{k}");
    }
    assert_eq!(v["results"]["energies"]["E+_2"], "1");
}

#[test]
fn stats_output_is_stable_and_timing_is_opt_in() {
    let a = sumprod(&["stats", "--family", "gp,6,1,3"]);
    let b = sumprod(&["stats", "--family", "gp,6,1,3"]);
    assert_eq!(a.stdout, b.stdout);
    let t = sumprod(&["stats", "--family", "gp,6,1,3", "--timing"]);
    assert!(json(&t)["timing"].is_object());
}

#[test]
fn gen_then_stats_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("a.txt");
    let out = sumprod(&["gen", "--family", "random,10,1,50,3", "--out", p(&file)]);
    assert!(out.status.success());
    assert_eq!(json(&out)["results"]["size"], 10);
    let out = sumprod(&["stats", "--set", p(&file)]);
    assert!(out.status.success());
    assert_eq!(json(&out)["results"]["sizes"]["|A|"], 10);
}

#[test]
fn check_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = sumprod(&[
        "check", "--family", "ap,6,1,1", "--family", "gp,5,1,2", "--registry", "chain.,petridis",
        "--format", "csv", "--out", p(&csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap();
    for col in ["check_id", "kind", "lhs", "rhs_core", "ratio", "verdict"] {
        assert!(header.contains(col));
    }
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn check_json_is_deterministic_across_job_counts() {
    let args = ["check", "--family", "ap,5,1,1", "--family", "random,6,1,30,9", "--registry", "ruzsa_triangle,growth."];
    let a = sumprod(&[&args[..], &["--jobs", "1"]].concat());
    let b = sumprod(&[&args[..], &["--jobs", "3"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corrupt_set_file_fails_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, "1\n2\nthree\n").unwrap();
    let out = sumprod(&["check", "--set", p(&file)]);
    assert!(!out.status.success());
    let v = json(&out);
    let msg = v["error"].as_str().unwrap();
    assert!(msg.contains("three") || msg.contains('3'), "{msg}");
}

#[test]
fn usage_errors() {
    assert!(!sumprod(&["gen", "--family", "gp,4,1,1"]).status.success());
    assert!(!sumprod(&["search", "--objective", "A*A", "--family", "ap,4,1,1"]).status.success());
    assert!(!sumprod(&["check", "--registry", "no_such_check"]).status.success());
}

#[test]
fn search_writes_report_and_best_set() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("s.json");
    let out = sumprod(&[
        "search", "--objective", "A:A+A", "--exponent", "3/2", "--family", "random,6,1,40,2",
        "--budget", "20", "--seed", "1", "--out", p(&report),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["command"], "search");
    let best = std::fs::read_to_string(report.with_extension("best.txt")).unwrap();
    assert_eq!(best.lines().filter(|l| !l.trim().is_empty()).count(), 6);
}
