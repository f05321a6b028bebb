//! One test per acceptance criterion. Each prints its report line before
//! asserting, so `cargo test -- --nocapture` shows the full table.

use solvable::acceptance::{self, Report};

fn gate(r: Report) {
    println!("{r}");
    assert!(r.passed, "criterion {} failed", r.id);
}

#[test]
fn criterion_01_oscillator_spectrum() {
    gate(acceptance::criterion_1());
}

#[test]
fn criterion_02_ode_residuals() {
    gate(acceptance::criterion_2());
}

#[test]
fn criterion_03_rodrigues_equivalence() {
    gate(acceptance::criterion_3());
}

#[test]
fn criterion_04_orthogonality() {
    gate(acceptance::criterion_4());
}

#[test]
fn criterion_05_cube_root_eigenpairs() {
    gate(acceptance::criterion_5());
}

#[test]
fn criterion_06_admissibility_filter() {
    gate(acceptance::criterion_6());
}

#[test]
fn criterion_07_translated_oscillator() {
    gate(acceptance::criterion_7());
}

#[test]
fn criterion_08_cubic_round_trip() {
    gate(acceptance::criterion_8());
}

#[test]
fn criterion_09_fd_containment() {
    gate(acceptance::criterion_9());
}

#[test]
fn criterion_10_finite_cutoff() {
    gate(acceptance::criterion_10());
}
