use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bmhad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmhad")).args(args).env_remove("HW_SWEEP_BOUND").output().expect("binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let out = bmhad(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bmhad-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn dense_matrix_round_trips_through_verify() {
    let path = scratch("iv.json");
    let out = bmhad(&["construct", "--case", "iv", "--q", "4", "--branch", "+", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(m["format_version"], 1);
    assert_eq!(m["tower"].as_array().unwrap().len(), 1);
    let rows = m["entries"].as_array().unwrap();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 15));

    let v = json_out(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(v["type_ii"], true);
    assert_eq!(v["hadamard"], true);
    assert_eq!(v["isolated"], true);
}

#[test]
fn depth_two_tower_for_case_vi() {
    let m = json_out(&["construct", "--case", "vi", "--q", "4", "--r-sign", "+"]);
    assert_eq!(m["tower"].as_array().unwrap().len(), 2);
}

#[test]
fn general_q_writes_family_with_integral_r() {
    let f = json_out(&["construct", "--case", "i", "--q", "10"]);
    assert_eq!(f["r_integral"], "39");
    assert_eq!(f["weights"].as_array().unwrap().len(), 4);
    assert!(f.get("entries").is_none());

    let f = json_out(&["construct", "--case", "i", "--q", "12"]);
    assert_eq!(f["r_integral"], Value::Null);
}

#[test]
fn dense_output_needs_the_concrete_scheme() {
    let out = bmhad(&["construct", "--case", "i", "--q", "10", "--dense", "true"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no concrete scheme"));
}

#[test]
fn invalid_q_is_rejected() {
    for q in ["5", "2"] {
        let out = bmhad(&["construct", "--case", "iv", "--q", q]);
        assert_eq!(out.status.code(), Some(2));
    }
}

#[test]
fn verify_by_case() {
    let v = json_out(&["verify", "--case", "iv", "--q", "4"]);
    assert_eq!(v["type_ii"], true);
    assert_eq!(v["hadamard"], true);
    assert_eq!(v["isolated"], true);
    assert!(v["non_butson_witness"]["a"].is_string());

    let v = json_out(&["verify", "--case", "i", "--q", "4"]);
    assert_eq!(v["type_ii"], true);
    assert_eq!(v["hadamard"], false);

    let v = json_out(&["verify", "--case", "vi", "--q", "4", "--r-sign", "-"]);
    assert_eq!(v["type_ii"], true);
    assert_eq!(v["hadamard"], false);

    let v = json_out(&["verify", "--case", "v", "--q", "8"]);
    assert_eq!(v["hadamard"], true);
    assert!(v.get("isolated").is_none());
}

#[test]
fn report_is_deterministic() {
    let args = ["report", "--suite", "pell", "--range", "-3..3", "--format", "json"];
    let a = bmhad(&args);
    let b = bmhad(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["format_version"], 1);
    let checks = v["suites"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    let seq = checks.iter().find(|c| c["check_id"] == "pell.integral_r_sequence").unwrap();
    let sorted: Vec<&str> = seq["witness"]["sorted"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(sorted.starts_with(&["10", "26", "41210", "110890"]));
}

#[test]
fn report_csv_and_exit_code() {
    let out = bmhad(&["report", "--suite", "scheme", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,check_id,status,q_range\n"));
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn sweep_bound_env_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_bmhad"))
        .args(["report", "--suite", "pell"])
        .env("HW_SWEEP_BOUND", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = bmhad(&["report", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}
