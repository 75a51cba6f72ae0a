//! One test per end-to-end criterion. Each prints a PASS/FAIL line with the
//! compared numbers before asserting.

use orbitcount_core::verify::{run_criterion, VerifyOptions};

fn check(id: u8) {
    let out = run_criterion(id, &VerifyOptions::default()).expect("known criterion");
    println!("{}", out.summary_line());
    assert!(out.passed, "{}", out.summary_line());
}

#[test]
fn ac01_triangulated_growth_exponent() {
    check(1);
}

#[test]
fn ac02_symmetric_power_scaling() {
    check(2);
}

#[test]
fn ac03_prime_orbit_ratio() {
    check(3);
}

#[test]
fn ac04_equidistribution_product_structure() {
    check(4);
}

#[test]
fn ac05_benoist_estimate() {
    check(5);
}

#[test]
fn ac06_exact_identities() {
    check(6);
}

#[test]
fn ac07_closed_form_thermodynamics() {
    check(7);
}

#[test]
fn ac08_limit_cone_and_phi_counting() {
    check(8);
}

#[test]
fn ac09_orbital_bound() {
    check(9);
}

#[test]
fn ac10_arithmeticity_diagnostic() {
    check(10);
}
