//! One test per acceptance criterion; each prints its pass/fail line.

use std::io::Write;

use normone_core::acceptance::*;

fn check(result: CriterionResult) {
    // Straight to the handle so the line shows up without --nocapture.
    let _ = writeln!(std::io::stdout().lock(), "{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_01_oracle_equivalence() {
    check(criterion_1());
}

#[test]
fn criterion_02_exact_properties() {
    check(criterion_2());
}

#[test]
fn criterion_03_unit_invariance() {
    check(criterion_3());
}

#[test]
fn criterion_04_counting() {
    check(criterion_4());
}

#[test]
fn criterion_05_weyl_decay() {
    check(criterion_5());
}

#[test]
fn criterion_06_discrepancy_decay() {
    check(criterion_6());
}

#[test]
fn criterion_07_l_identity() {
    check(criterion_7());
}

#[test]
fn criterion_08_cubic_weyl() {
    check(criterion_8());
}

#[test]
fn criterion_09_collision_probe() {
    check(criterion_9());
}

#[test]
fn criterion_10_determinism() {
    check(criterion_10());
}
