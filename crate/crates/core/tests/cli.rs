//! End-to-end runs of the `poring-lab` binary on the shipped fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

const PASSING: [&str; 8] = ["a0", "a1", "a2", "q", "z5", "zxz", "cubic", "quartic"];

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.ring"))
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("poring-lab-{}-{name}", std::process::id()))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poring-lab"))
        .args(args)
        .env_remove("PORING_LAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 report")
}

#[test]
fn passing_fixtures_exit_zero() {
    for name in PASSING {
        let path = fixture(name);
        let out = run(&[path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}:\n{}", stdout(&out));
        assert!(!stdout(&out).contains("FAIL"), "{name}");
    }
}

#[test]
fn diagonal_fixture_fails_with_a_witness_block() {
    let path = fixture("diag");
    let out = run(&[path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL essext:D:QQ2"), "{text}");
    assert!(text.contains("not essential"), "{text}");
}

#[test]
fn parse_errors_exit_two_with_position_and_hint() {
    let path = scratch("unclosed.ring");
    std::fs::write(&path, "field K = poly(1, 0, -1\n").unwrap();
    let out = run(&[path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("line 1") && err.contains("syntax error") && err.contains("hint"),
        "{err}"
    );
}

#[test]
fn undeclared_field_is_a_usage_error() {
    let path = scratch("undeclared.ring");
    std::fs::write(
        &path,
        "field K = poly(-2, 0, 1)\nambient B = product(K, L)\n",
    )
    .unwrap();
    let out = run(&[path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains('L'));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["/nonexistent/ring/file.ring"]).status.code(), Some(2));
}

#[test]
fn structured_reports_are_reproducible() {
    let path = fixture("a2");
    let args = [
        "--format",
        "structured",
        "--seed",
        "11",
        path.to_str().unwrap(),
    ];
    let first = stdout(&run(&args));
    let second = stdout(&run(&args));
    assert_eq!(first, second);
    let json: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(json["seed"], 11);
    assert_eq!(json["input_sha256"].as_str().map(str::len), Some(64));
    let records = json["records"].as_array().unwrap();
    assert_eq!(records.len(), 7);
    assert!(records.iter().all(|r| r["status"] == "PASS"));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let path = fixture("a1");
    let flag = stdout(&run(&[
        "--format",
        "structured",
        "--seed",
        "5",
        path.to_str().unwrap(),
    ]));
    let env = Command::new(env!("CARGO_BIN_EXE_poring-lab"))
        .args(["--format", "structured", path.to_str().unwrap()])
        .env("PORING_LAB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(flag, stdout(&env));
}

#[test]
fn out_file_and_parallel_runs_match_stdout() {
    let files: Vec<String> = ["a0", "a2", "q"]
        .iter()
        .map(|n| fixture(n).display().to_string())
        .collect();
    let mut args: Vec<&str> = files.iter().map(String::as_str).collect();
    let sequential = stdout(&run(&args));
    args.push("--parallel");
    assert_eq!(stdout(&run(&args)), sequential);
    let target = scratch("report.txt");
    let target_str = target.display().to_string();
    args.extend(["--out", &target_str]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&target).unwrap(), sequential);
    std::fs::remove_file(&target).ok();
}
