//! The eight acceptance criteria, one test each. Every test prints a
//! single PASS/FAIL line with the measured values.

use lsys_core::verify::{run_criterion, CriterionResult, VerifyOptions};

fn check(id: u8) {
    let result: CriterionResult = run_criterion(id, &VerifyOptions::default()).unwrap();
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_1_example_one() {
    check(1);
}

#[test]
fn criterion_2_example_two() {
    check(2);
}

#[test]
fn criterion_3_weyl_oracle() {
    check(3);
}

#[test]
fn criterion_4_round_trip() {
    check(4);
}

#[test]
fn criterion_5_kernel_positivity() {
    check(5);
}

#[test]
fn criterion_6_angle_identities() {
    check(6);
}

#[test]
fn criterion_7_measure_consistency() {
    check(7);
}

#[test]
fn criterion_8_classification_table() {
    check(8);
}
