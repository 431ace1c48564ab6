//! One test per acceptance criterion. Each prints a single PASS/FAIL line.

use polydisc_verify::acceptance::{run, DEFAULT_SEED};

fn check(id: u8) {
    let outcome = run(id, DEFAULT_SEED);
    println!("{outcome}");
    assert!(outcome.pass, "{outcome}");
}

#[test]
fn criterion_01_counterexample() {
    check(1);
}

#[test]
fn criterion_02_one_variable_solvability() {
    check(2);
}

#[test]
fn criterion_03_function_norm_equals_toeplitz_norm() {
    check(3);
}

#[test]
fn criterion_04_schur_identity() {
    check(4);
}

#[test]
fn criterion_05_equivalence_flip() {
    check(5);
}

#[test]
fn criterion_06_nehari_one_variable() {
    check(6);
}

#[test]
fn criterion_07_laurent_truncation() {
    check(7);
}

#[test]
fn criterion_08_special_cases() {
    check(8);
}

#[test]
fn criterion_09_round_trips() {
    check(9);
}

#[test]
fn criterion_10_kp_end_to_end() {
    check(10);
}
