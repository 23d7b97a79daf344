//! Acceptance gate: the ten numbered criteria, one test per criterion, each
//! printing a pass/fail line with its measured deviations (visible with
//! `cargo test --test acceptance -- --nocapture`).

use chiralqed::cli::validate::{self, CheckResult};

fn report(criterion: u32, result: CheckResult) {
    let status = if result.passed { "PASS" } else { "FAIL" };
    println!("{status} criterion {criterion} ({}): {}", result.name, result.detail);
    assert!(result.passed, "criterion {criterion} ({}): {}", result.name, result.detail);
}

#[test]
fn criterion_01_energy_conservation() {
    report(1, validate::check_energy_conservation());
}

#[test]
fn criterion_02_single_atom_oracles() {
    report(2, validate::check_single_atom_oracles());
}

#[test]
fn criterion_03_reflection_antibunching() {
    report(3, validate::check_reflection_antibunching());
}

#[test]
fn criterion_04_two_atom_transparency() {
    report(4, validate::check_two_atom_transparency());
}

#[test]
fn criterion_05_reflected_photon_statistics() {
    report(5, validate::check_reflected_photon_statistics());
}

#[test]
fn criterion_06_quantum_critical_coupling() {
    report(6, validate::check_quantum_critical_coupling());
}

#[test]
fn criterion_07_nonreciprocal_transmission() {
    report(7, validate::check_nonreciprocal_transmission());
}

#[test]
fn criterion_08_classical_reciprocity() {
    report(8, validate::check_classical_reciprocity());
}

#[test]
fn criterion_09_incoherent_periodicity() {
    report(9, validate::check_incoherent_periodicity());
}

#[test]
fn criterion_10_solver_cross_validation() {
    report(10, validate::check_solver_cross_validation());
}
