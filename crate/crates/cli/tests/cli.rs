use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qclutch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclutch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_output(dir: &Path, name: &str, args: &[&str]) -> String {
    let o = qclutch(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let path = dir.join(name);
    std::fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

/// Reads a polynomial JSON back as `(coefficient, variable -> exponent)` terms.
fn poly_terms(p: &Value) -> Vec<(String, Vec<(String, u64)>)> {
    let vars: Vec<&str> = p["vars"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    p["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let exps = t["exps"]
                .as_array()
                .unwrap()
                .iter()
                .zip(&vars)
                .filter(|(e, _)| e.as_u64().unwrap() > 0)
                .map(|(e, v)| (v.to_string(), e.as_u64().unwrap()))
                .collect();
            (t["coef"].as_str().unwrap().to_string(), exps)
        })
        .collect()
}

#[test]
fn classify_text_output() {
    let o = qclutch(&["classify", "--i", "2", "--j", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("NotSmooth ("));
    let o = qclutch(&["classify", "--i", "1", "--j", "4"]);
    assert!(stdout(&o).starts_with("OpenCase"));
}

#[test]
fn beta2_json_is_the_expected_matrix() {
    let o = qclutch(&["suslin", "--n", "2", "--beta", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["beta"]["rows"], 2);
    let entries: Vec<_> = v["beta"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(poly_terms)
        .collect();
    let mono = |c: &str, var: &str| vec![(c.to_string(), vec![(var.to_string(), 1)])];
    assert_eq!(
        entries,
        [mono("1", "x1"), mono("1", "x2"), mono("-1", "y2"), mono("1", "y1")]
    );
    assert!(v["certificate"]["steps"].as_array().unwrap().is_empty());
}

#[test]
fn artifacts_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases = [
        ("c.json", vec!["cocycle", "--n", "2", "--map", "beta"], "--cocycle"),
        ("l.json", vec!["cocycle", "--n", "1", "--map", "line:-2"], "--cocycle"),
        (
            "b.json",
            vec!["suslin", "--n", "3", "--beta", "--format", "json"],
            "--suslin",
        ),
        (
            "t.json",
            vec!["derive", "--target", "qeven", "--n", "5", "--format", "json"],
            "--trace",
        ),
        (
            "x.json",
            vec!["derive", "--target", "x", "--n", "3", "--format", "json"],
            "--trace",
        ),
    ];
    for (name, args, flag) in cases {
        let path = write_output(d, name, &args);
        let o = qclutch(&["verify", flag, &path]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn cocycle_from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let beta = write_output(
        dir.path(),
        "b.json",
        &["suslin", "--n", "2", "--beta", "--format", "json"],
    );
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&beta).unwrap()).unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, v["beta"].to_string()).unwrap();
    let from_file = qclutch(&["cocycle", "--n", "2", "--map", "file", m.to_str().unwrap()]);
    assert!(
        from_file.status.success(),
        "{}",
        String::from_utf8_lossy(&from_file.stderr)
    );
    let direct = qclutch(&["cocycle", "--n", "2", "--map", "beta"]);
    let a: Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    let b: Value = serde_json::from_str(&stdout(&direct)).unwrap();
    assert_eq!(a["matrix"], b["matrix"]);
    assert_eq!(a["unit"], b["unit"]);
}

#[test]
fn tampered_cocycle_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_output(dir.path(), "c.json", &["cocycle", "--n", "2", "--map", "beta"]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let coef = &mut v["matrix"]["entries"][1]["num"]["terms"][0]["coef"];
    let flipped = if coef.as_str() == Some("1") { "-1" } else { "1" };
    *coef = Value::String(flipped.into());
    std::fs::write(&path, v.to_string()).unwrap();
    let o = qclutch(&["verify", "--cocycle", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("check failed"));
}

#[test]
fn tampered_trace_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_output(
        dir.path(),
        "t.json",
        &["derive", "--target", "qeven", "--n", "3", "--format", "json"],
    );
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["steps"][1]["rule"] = Value::String("octahedral".into());
    std::fs::write(&path, v.to_string()).unwrap();
    assert_eq!(qclutch(&["verify", "--trace", &path]).status.code(), Some(1));
}

#[test]
fn check_json_is_deterministic() {
    let args = ["check", "--suite", "all", "--seed", "7", "--format", "json"];
    let a = qclutch(&args);
    let b = qclutch(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["failed"], 0);
    assert_eq!(v["suite"], "all");
}

#[test]
fn exit_codes() {
    assert_eq!(qclutch(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qclutch(&["classify", "--i", "x", "--j", "1"]).status.code(), Some(2));
    assert_eq!(qclutch(&["check", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(qclutch(&["suslin", "--n", "0"]).status.code(), Some(2));
    assert_eq!(qclutch(&["derive", "--target", "x", "--n", "0"]).status.code(), Some(2));
    assert_eq!(
        qclutch(&["cocycle", "--n", "2", "--map", "line:1"]).status.code(),
        Some(2)
    );
    assert_eq!(qclutch(&["verify"]).status.code(), Some(2));
    assert_eq!(
        qclutch(&["verify", "--trace", "/nonexistent/trace.json"]).status.code(),
        Some(2)
    );
}
