use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polydisc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const COUNTEREXAMPLE: &str =
    r#"{"nvars":2,"terms":[{"alpha":[1,0],"re":0.7071067811865476},{"alpha":[0,2],"re":0.5}]}"#;

#[test]
fn cf_extend_rejects_the_counterexample_at_step_three() {
    let out = run(&["cf-extend", "--max-order", "6"], COUNTEREXAMPLE);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["result"]["status"]["kind"], "FAILED_DEGREE");
    assert_eq!(doc["result"]["status"]["step"], 3);
    assert_eq!(doc["result"]["status"]["offending"], serde_json::json!([[4]]));
    let re = doc["result"]["rejected"]["terms"][0]["re"].as_f64().unwrap();
    assert!((re + 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-8);
    assert_eq!(doc["config"]["max_order"], 6);
}

#[test]
fn necessary_condition_holds_for_the_counterexample() {
    let out = run(&["check-necessary"], COUNTEREXAMPLE);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["result"]["pass"], true);
    assert!(doc["result"]["margin"].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(doc["result"]["agree"], true);
}

#[test]
fn reformulate_zero_polynomial_and_back() {
    let out = run(&["reformulate"], r#"{"nvars":2,"terms":[]}"#);
    assert_eq!(out.status.code(), Some(0));
    let fam = &json_of(&out)["result"]["family"];
    assert_eq!(fam["symbols"], serde_json::json!([]));

    let out = run(&["reformulate"], COUNTEREXAMPLE);
    let fam = json_of(&out)["result"]["family"].to_string();
    let back = run(&["reformulate", "--invert"], &fam);
    assert_eq!(back.status.code(), Some(0));
    let p = &json_of(&back)["result"]["polynomial"];
    let original: Value = serde_json::from_str(COUNTEREXAMPLE).unwrap();
    assert_eq!(p["terms"].as_array().unwrap().len(), 2);
    assert_eq!(p["nvars"], original["nvars"]);
}

#[test]
fn kp_check_accepts_half_z() {
    let out = run(&["kp-check", "--depth", "6"], r#"{"nvars":1,"terms":[{"alpha":[1],"re":0.5}]}"#);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["result"]["positive"], true);
    assert_eq!(doc["result"]["depths"].as_array().unwrap().len(), 6);
}

#[test]
fn kp_check_rejects_a_non_contraction() {
    let out = run(&["kp-check", "--depth", "3"], r#"{"nvars":1,"terms":[{"alpha":[1],"re":1.5}]}"#);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["result"]["positive"], false);
}

#[test]
fn malformed_input_names_the_field() {
    let out = run(&["check-necessary"], r#"{"nvars":1,"terms":[{"alpha":[1],"re":"half"}]}"#);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("terms[0].re"), "{err}");

    let out = run(&["check-necessary"], r#"{"nvars":1}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("terms"));
}

#[test]
fn invalid_configuration_is_an_input_error() {
    let out = run(&["--grid", "100", "check-necessary"], COUNTEREXAMPLE);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_echoes_the_config() {
    let a = run(&["--grid", "64", "--seed", "5", "nehari-dist"], r#"{"nvars":2,"terms":[{"alpha":[-1,0],"re":1.0},{"alpha":[0,-2],"re":0.5,"im":0.25}]}"#);
    let b = run(&["--grid", "64", "--seed", "5", "nehari-dist"], r#"{"nvars":2,"terms":[{"alpha":[-1,0],"re":1.0},{"alpha":[0,-2],"re":0.5,"im":0.25}]}"#);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = json_of(&a);
    assert_eq!(doc["config"]["points_per_axis"], 64);
    assert_eq!(doc["config"]["seed"], 5);
    assert_eq!(doc["command"], "nehari-dist");
}

#[test]
fn nehari_distance_of_conjugate_monomial_is_one() {
    let out = run(&["nehari-dist"], r#"{"nvars":1,"terms":[{"alpha":[-1],"re":1.0}]}"#);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out)["result"]["norm"]["value"].as_f64().unwrap();
    assert!((v - 1.0).abs() < 1e-12);
}

#[test]
fn special_case_verdicts() {
    let out = run(&["special-case", "--alpha", "0.25", "--beta", "0", "--gamma", "0.5", "--delta", "0"], "");
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["result"]["extension"]["case"], "second_factor_constant");
    assert_eq!(doc["result"]["extension"]["symbols"].as_array().unwrap().len(), 12);

    // arg α − arg β ≠ arg γ − arg δ
    let out = run(&["special-case", "--alpha", "0.1", "--beta", "0,0.1", "--gamma", "0.2", "--delta", "0.2"], "");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["result"]["extended"], false);

    let out = run(&["special-case", "--alpha", "x", "--beta", "0", "--gamma", "0", "--delta", "0"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parrott_completion_and_rejection() {
    let m = |x: f64| format!(r#"{{"rows":1,"cols":1,"re":[{x}]}}"#);
    let input = format!(r#"{{"a":{},"c":{},"d":{}}}"#, m(0.6), m(0.0), m(0.8));
    let out = run(&["parrott"], &input);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert!(doc["result"]["completed_norm"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert_eq!(doc["result"]["unique"], false);

    let input = format!(r#"{{"a":{},"c":{},"d":{}}}"#, m(1.2), m(0.0), m(0.5));
    let out = run(&["parrott"], &input);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["result"]["completable"], false);
}

#[test]
fn toeplitz_norm_of_a_family() {
    let out = run(&["toeplitz-norm"], r#"{"symbols":[{"nvars":1,"terms":[{"alpha":[0],"re":0.5}]},{"nvars":1,"terms":[{"alpha":[1],"re":0.5}]}]}"#);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out)["result"]["norm"]["value"].as_f64().unwrap();
    // [[1/2, λ/2], [0, 1/2]] has norm (1 + √5)/4 for every |λ| = 1
    assert!((v - (1.0 + 5f64.sqrt()) / 4.0).abs() < 1e-12);
}

#[test]
fn kp_identity_on_supplied_coefficients() {
    let out = run(&["kp-identity"], r#"{"a":[[0.3,0.1],[0.2,0.0],[-0.1,0.4]]}"#);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["result"]["pass"], true);
    assert_eq!(doc["result"]["n"], 3);
}

#[test]
fn selftest_runs_a_single_criterion() {
    let out = run(&["selftest", "--only", "4"], "");
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["result"]["pass"], true);
    assert_eq!(doc["result"]["criteria"][0]["id"], 4);
    assert!(String::from_utf8(out.stderr).unwrap().contains("[PASS]"));
}
