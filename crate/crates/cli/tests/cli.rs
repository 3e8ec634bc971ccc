use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvrealign"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn record<'a>(records: &'a Value, criterion: &str) -> &'a Value {
    records
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["criterion"] == criterion)
        .unwrap_or_else(|| panic!("no {criterion} record"))
}

#[test]
fn eprnoise_weak_value() {
    let out = run(&["criterion", "eprnoise", "--r", "0.2", "--V", "0.4"]);
    assert_eq!(code(&out), 0);
    let records = stdout_json(&out);
    let weak = record(&records, "weak_realignment");
    let expected = 1.0 / (0.4 + (-0.4f64).exp());
    assert!((weak["value"].as_f64().unwrap() - expected).abs() < 1e-9);
    assert_eq!(weak["detected"], false);
    assert_eq!(record(&records, "ppt")["detected"], true);
}

#[test]
fn gamma1_verdicts() {
    let out = run(&["criterion", "gamma1"]);
    assert_eq!(code(&out), 0);
    let records = stdout_json(&out);
    let weak = record(&records, "weak_realignment");
    let norm = record(&records, "realignment_normal_form");
    assert!((weak["value"].as_f64().unwrap() - 0.962).abs() < 1e-3);
    assert!((norm["value"].as_f64().unwrap() - 1.083).abs() < 1e-3);
    assert_eq!(weak["detected"], false);
    assert_eq!(norm["detected"], true);
    assert_eq!(record(&records, "ppt")["detected"], true);
}

#[test]
fn vacuum_detects_nothing() {
    let records = stdout_json(&run(&["criterion", "vacuum"]));
    for r in records.as_array().unwrap() {
        assert_eq!(r["detected"], false, "{r}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["criterion", "epr4"][..],
        &["sweep-t", "gamma1", "--grid", "64"],
        &["examples"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(
            code(&a),
            0,
            "{args:?}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
    }
}

#[test]
fn files_are_written_under_out() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    assert_eq!(code(&run(&["criterion", "gamma2", "--out", out_dir])), 0);
    assert_eq!(
        code(&run(&[
            "sweep-t", "eprnoise", "--grid", "32", "--out", out_dir
        ])),
        0
    );
    let criterion: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("gamma2.criterion.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(criterion.as_array().unwrap().len(), 3);
    let csv = std::fs::read_to_string(dir.path().join("eprnoise.csv")).unwrap();
    assert!(csv.starts_with("t,trace_R,detected,det_A,det_B\n"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 33);
    let summary: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("eprnoise.summary.json")).unwrap(),
    )
    .unwrap();
    let root = &summary["roots"][0];
    assert!((root["t"].as_f64().unwrap() - 0.2f64.tanh().powi(2)).abs() < 1e-9);
    assert_eq!(root["trace_equals_norm"], true);
}

fn detection_intervals(args: &[&str]) -> usize {
    let dir = tempfile::tempdir().unwrap();
    let mut all = args.to_vec();
    all.extend(["--out", dir.path().to_str().unwrap()]);
    let out = run(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("gamma2.summary.json")).unwrap(),
    )
    .unwrap();
    summary["detection_intervals"].as_array().unwrap().len()
}

#[test]
fn gamma2_needs_the_phase_flip() {
    assert_eq!(detection_intervals(&["sweep-t", "gamma2"]), 0);
    assert!(detection_intervals(&["sweep-t", "gamma2", "--pre-phase", "pi"]) > 0);
}

#[test]
fn config_with_several_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "runs.json",
        r#"[
            {"id": "noisy", "state": {"builtin": {"name": "eprnoise", "params": {"r": 0.5, "V": 0.3}}}},
            {"id": "explicit", "criteria": ["ppt"],
             "state": {"covariance": {"n_modes": 2, "entries": [
                0.5,0,0,0, 0,0.5,0,0, 0,0,0.5,0, 0,0,0,0.5]}}}
        ]"#,
    );
    let out = run(&["criterion", "--config", &path]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let records = stdout_json(&out);
    let records = records.as_array().unwrap();
    assert_eq!(records.len(), 4);
    assert_eq!(records[3]["criterion"], "ppt");
    assert_eq!(records[3]["detected"], false);
}

#[test]
fn malformed_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.json",
        r#"{"id": "x", "state": {"builtin": {"name": "tmsv"}}, "critera": []}"#,
    );
    let out = run(&["criterion", "--config", &path]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("critera"));
}

#[test]
fn unphysical_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "squeezed_too_far.json",
        r#"{"id": "bad", "state": {"covariance": {"n_modes": 2, "entries": [
            0.2,0,0,0, 0,0.2,0,0, 0,0,0.5,0, 0,0,0,0.5]}}}"#,
    );
    let out = run(&["criterion", "--config", &path]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unphysical"));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["criterion"])), 2);
    assert_eq!(code(&run(&["criterion", "nosuchstate"])), 2);
    assert_eq!(code(&run(&["sweep-t", "tmsv"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn examples_pass() {
    let out = run(&["examples"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("[FAIL]"));
    assert!(text.contains("theta=pi never detected"));
}

#[test]
fn oracle_agrees_with_closed_forms() {
    let out = run(&["oracle", "eprnoise", "--t", "0.3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("[FAIL]"));
}

#[test]
fn oracle_escalation_failure() {
    let out = run(&["oracle", "tmsv", "--tau", "0.9", "--cutoff", "20"]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn oracle_mismatch_at_a_coarse_cutoff() {
    let out = run(&["oracle", "tmsv", "--tau", "0.3", "--cutoff", "10"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn oracle_rejects_states_it_cannot_build() {
    assert_eq!(code(&run(&["oracle", "gamma1"])), 2);
}
