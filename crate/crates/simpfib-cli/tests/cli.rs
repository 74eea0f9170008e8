//! Exit-code contract and golden-output tests for the `simpfib` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simpfib"))
}

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn verify_ses_z4_passes() {
    let spec = specs_dir().join("z4.json");
    let out = run(&["verify-ses", "--ses", spec.to_str().unwrap(), "--max-dim", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("overall: pass"));
}

#[test]
fn verify_ses_s3_json_includes_phi() {
    let spec = specs_dir().join("s3_split.json");
    let out = run(&[
        "verify-ses",
        "--ses",
        spec.to_str().unwrap(),
        "--max-dim",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(report["schema_version"], 1);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.starts_with("phi/")));
    assert!(names.iter().any(|n| n.starts_with("psi/")));
}

#[test]
fn missing_spec_file_is_usage_error() {
    let out = run(&["verify-ses", "--ses", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_spec_is_usage_error() {
    let dir = std::env::temp_dir().join("simpfib-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("garbage.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["verify-ses", "--ses", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_group_family_is_usage_error() {
    let out = run(&["verify-twist", "--group", "sporadic:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_twist_examples_pass() {
    let out = run(&["verify-twist", "--group", "cyclic:4", "--which", "canonical", "--max-dim", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = run(&["verify-twist", "--group", "symmetric:3", "--which", "loop", "--max-dim", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn homology_reports_z4() {
    let spec = specs_dir().join("z4.json");
    let out = run(&["homology", "--ses", spec.to_str().unwrap(), "--space", "bar", "--max-dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("H_1 = Z/4"));
    let twisted = run(&["homology", "--ses", spec.to_str().unwrap(), "--space", "twisted", "--max-dim", "3"]);
    assert_eq!(twisted.status.code(), Some(0));
    assert_eq!(
        stdout(&out).lines().skip(1).collect::<Vec<_>>(),
        stdout(&twisted).lines().skip(1).collect::<Vec<_>>(),
        "bar and twisted homology must agree"
    );
}

#[test]
fn homology_of_trivial_group() {
    let out = run(&["homology", "--group", "trivial", "--max-dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("H_0 = Z"));
    assert!(text.contains("H_1 = 0"));
    assert!(text.contains("H_2 = 0"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("simpfib-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let spec = specs_dir().join("z4.json");
    let out = run(&[
        "verify-ses",
        "--ses",
        spec.to_str().unwrap(),
        "--max-dim",
        "2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["suite"], "verify-theorem");
}

#[test]
fn jobs_env_var_is_honored() {
    let spec = specs_dir().join("z4.json");
    let out = bin()
        .args(["verify-ses", "--ses", spec.to_str().unwrap(), "--max-dim", "2"])
        .env("SIMPFIB_JOBS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = bin()
        .args(["verify-ses", "--ses", spec.to_str().unwrap()])
        .env("SIMPFIB_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn demo_output_is_bit_exact() {
    let out = run(&["demo", "--example", "z4", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("demo_z4_dim2.txt"));

    let out = run(&["demo", "--example", "s3", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("demo_s3_dim2.txt"));

    let out = run(&["demo", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("demo_list.txt"));
}

#[test]
fn demo_unknown_example_is_usage_error() {
    let out = run(&["demo", "--example", "q8"]);
    assert_eq!(out.status.code(), Some(2));
}
