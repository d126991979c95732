use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cohh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohh")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn dims(v: &Value) -> Vec<(u64, u64, u64)> {
    v["table"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["s"].as_u64().unwrap(), r["t"].as_u64().unwrap(), r["dim"].as_u64().unwrap()))
        .collect()
}

#[test]
fn cohh_exterior_table() {
    let out = cohh(&["cohh", "--kind", "exterior", "--degrees", "3", "--field", "2", "--max-s", "4", "--max-t", "15", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mut nonzero: Vec<(u64, u64)> = dims(&v).into_iter().filter(|r| r.2 > 0).map(|r| (r.0, r.1)).collect();
    nonzero.sort();
    let mut want: Vec<(u64, u64)> = (0..=4).flat_map(|q| [(q, 3 * q), (q, 3 * q + 3)]).filter(|&(_, t)| t <= 15).collect();
    want.sort();
    assert_eq!(nonzero, want);
    assert!(dims(&v).iter().all(|r| r.2 <= 1));
    assert_eq!(v["meta"]["bounds"]["s_max"], 4);
    assert_eq!(v["meta"]["bounds"]["t_max"], 15);
    assert_eq!(v["meta"]["field"], 2);
    assert!(v["meta"]["version"].is_string());
}

#[test]
fn collapse_verdict_and_bound() {
    let out = cohh(&["collapse", "--degrees", "3,5", "--prime", "7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "Collapses");
    assert_eq!(v["bound"]["value"], 5.5);
    assert_eq!(v["candidates"].as_array().unwrap().len(), 0);
}

#[test]
fn collapse_with_candidates_lists_them() {
    let out = cohh(&["collapse", "--degrees", "3,5", "--prime", "3", "--max-s", "11", "--max-t", "20", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "CandidatesExist");
    let cands = v["candidates"].as_array().unwrap();
    assert!(!cands.is_empty());
    assert!(cands.iter().all(|c| c["r"] == 2));
}

#[test]
fn loops_csv() {
    let out = cohh(&["loops", "--degrees", "3", "--prime", "5", "--max-degree", "10", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let got: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(got, ["1", "0", "1", "1", "1", "1", "1", "1", "1", "1", "1"]);
}

#[test]
fn loops_refuses_without_collapse() {
    let out = cohh(&["loops", "--degrees", "3,5", "--prime", "3", "--max-degree", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("collapse"));
}

#[test]
fn input_errors_exit_one() {
    for args in [
        &["cohh", "--kind", "exterior", "--degrees", "4"][..],
        &["cohh", "--kind", "exterior", "--degrees", "3", "--field", "4"][..],
        &["cohh", "--bogus"][..],
        &["run", "/nonexistent/job.json"][..],
    ] {
        let out = cohh(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn json_output_is_byte_identical() {
    let args = ["e2", "--kind", "exterior", "--degrees", "3,5", "--field", "3", "--max-s", "3", "--max-t", "16", "--format", "json"];
    let a = cohh(&args);
    let b = cohh(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["cohh", "--kind", "exterior", "--degrees", "3,5", "--field", "5", "--max-s", "3", "--max-t", "16", "--format", "json"];
    let one = Command::new(env!("CARGO_BIN_EXE_cohh")).args(args).env("COHH_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_cohh")).args(args).env("COHH_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn json_output_round_trips_as_expected_table() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("table.json");
    let base = ["cohh", "--kind", "exterior", "--degrees", "3", "--field", "3", "--max-s", "4", "--max-t", "15"];
    let mut args = base.to_vec();
    args.extend(["--format", "json", "--output", fixture.to_str().unwrap()]);
    assert_eq!(cohh(&args).status.code(), Some(0));

    let mut check = base.to_vec();
    check.extend(["--expect", fixture.to_str().unwrap()]);
    assert_eq!(cohh(&check).status.code(), Some(0));

    // a smaller t bound drops rows, so the comparison fails
    let mut other = base.to_vec();
    other[10] = "12";
    other.extend(["--expect", fixture.to_str().unwrap()]);
    assert_eq!(cohh(&other).status.code(), Some(1));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn job_file_with_coalgebra_path() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "lambda.json", r#"{"field": 3, "kind": "exterior", "degrees": [3, 5]}"#);
    let job = write(dir.path(), "job.json", r#"{"command": "e2", "coalgebra": "lambda.json", "s_max": 2, "t_max": 10, "format": "json"}"#);
    let out = cohh(&["run", &job]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["meta"]["field"], 3);
    assert!(dims(&v).contains(&(1, 8, 2)));
}

#[test]
fn job_file_with_inline_coalgebra() {
    let dir = tempfile::tempdir().unwrap();
    let job = write(
        dir.path(),
        "job.json",
        r#"{"command": "cohh", "coalgebra": {"field": 2, "kind": "exterior", "degrees": [3]}, "s_max": 2, "t_max": 9, "format": "csv"}"#,
    );
    let out = cohh(&["run", &job]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "1,6,1"));
}

#[test]
fn parse_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let job = write(dir.path(), "job.json", "{\"command\": \"e2\",\n \"kind\": \"exterior\",\n  \"degrees\": [3,],}");
    let out = cohh(&["run", &job]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn unknown_field_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let job = write(dir.path(), "job.json", r#"{"command": "e2", "kind": "exterior", "degrees": [3], "colour": 1}"#);
    let out = cohh(&["run", &job]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}

#[test]
fn other_commands_succeed() {
    for args in [
        &["validate", "--kind", "exterior", "--degrees", "3,5", "--field", "3"][..],
        &["audit", "--kind", "exterior", "--degrees", "3", "--field", "3", "--max-degree", "12"][..],
        &["cotor", "--kind", "exterior", "--degrees", "3", "--field", "2", "--max-s", "3", "--max-t", "12", "--left-comodule", "trivial", "--right-comodule", "trivial"][..],
        &["cohh", "--kind", "polynomial", "--degrees", "2", "--field", "3", "--max-s", "2", "--max-t", "12"][..],
    ] {
        let out = cohh(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty());
    }
}
