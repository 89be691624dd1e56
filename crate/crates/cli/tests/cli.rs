use std::process::{Command, Output};

use serde_json::Value;

fn reflat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reflat")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn an_4() {
    let v = json(&reflat(&["an", "4"]));
    assert_eq!(v["a_n"], 4);
}

#[test]
fn bn_4_reports_chamber_points() {
    let v = json(&reflat(&["bn", "4"]));
    assert_eq!(v["b_n"], 22);
    assert_eq!(v["chamber_points"][0]["norm"], 4);
}

#[test]
fn obstruct_ii_2_26_is_not_excluded() {
    let v = json(&reflat(&["obstruct", "2U+3E8"]));
    assert_eq!(v["report"]["verdict"], "NotExcluded");
}

#[test]
fn classify_verdicts() {
    let v = json(&reflat(&["classify", "2U+2E8+D8"]));
    assert_eq!(v["status"], "NotTwoReflective");
    assert!(v["reason_chain"].as_array().unwrap().iter().any(|s| s["verdict"] == "ExcludedInvariance"));
    let v = json(&reflat(&["classify", "2U+3E8"]));
    assert_eq!(v["status"], "Candidate");
}

#[test]
fn classify_with_config() {
    let dir = std::env::temp_dir().join(format!("reflat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(
        &path,
        r#"{"lambda_table": [{"family": "*", "lambda": "1/1000"}],
            "f_AI": {"11": "1"}, "f_AII": {"11": "1"},
            "pool_constants": {"11": {"a_n": 78, "b_n": 22}}}"#,
    )
    .unwrap();
    let v = json(&reflat(&["classify", "2U+E8+A1", "--config", path.to_str().unwrap()]));
    assert_eq!(v["n"], 11);
    assert!(v["provenance"]["config_dependent"].as_bool().unwrap());
    // |A| = 2 is below B^2 for this tiny slope
    assert_eq!(v["status"], "Candidate");
    let steps: Vec<&str> = v["reason_chain"].as_array().unwrap().iter().map(|s| s["step"].as_str().unwrap()).collect();
    assert_eq!(steps, ["length_condition", "pool_constants", "slope_bound", "discriminant_bound"]);
}

#[test]
fn curve_certificate() {
    let v = json(&reflat(&["curve", "2U+E8", "--target", "H0"]));
    assert_eq!(v["check"]["condition_i"], true);
    assert_eq!(v["check"]["condition_ii"], true);
    assert_eq!(v["certificate"]["pool_member"]["parameter"], 620);
}

#[test]
fn heegner_and_discform() {
    let v = json(&reflat(&["heegner", "2U+2A1"]));
    assert_eq!(v["pi_l"].as_array().unwrap().len(), 2);
    let v = json(&reflat(&["discform", "2U+D4"]));
    assert_eq!(v["order"], 4);
    assert_eq!(v["milgram_signature"], 4);
}

#[test]
fn roots_of_e8() {
    let v = json(&reflat(&["roots", "E8"]));
    assert_eq!(v["root_count"], 240);
    assert_eq!(v["root_system"], "E8");
}

#[test]
fn enumerate_small_bound() {
    let v = json(&reflat(&["enumerate", "--n", "10", "--bound", "3/2"]));
    assert_eq!(v["forms"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(reflat(&["bogus"]).status.code(), Some(2));
    assert_eq!(reflat(&["an", "x"]).status.code(), Some(2));
    assert_eq!(reflat(&["discform", "2U+Q9"]).status.code(), Some(2));
    assert_eq!(reflat(&["curve", "2U+E8", "--target", "mu:3"]).status.code(), Some(2));
}

#[test]
fn config_gap_is_reported_not_fatal() {
    let out = reflat(&["enumerate", "--n", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config incomplete"));
}

#[test]
fn cap_exit_code() {
    let dir = std::env::temp_dir().join(format!("reflat-cap-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("caps.json");
    std::fs::write(&path, r#"{"caps": {"chamber_norm": 10}}"#).unwrap();
    assert_eq!(reflat(&["an", "10", "--config", path.to_str().unwrap()]).status.code(), Some(3));
}
