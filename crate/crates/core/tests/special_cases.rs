//! The restricted-coupling family end to end: pattern matching, closed
//! form against the integrator, the relabeling symmetry, and the
//! homogeneous gate.

mod common;

use common::*;
use quadode_core::algebra::{cplx, ComplexScalar};
use quadode_core::inverse_map::reduce;
use quadode_core::oracle::{self, IntegrationSettings};
use quadode_core::solver::InitialState;
use quadode_core::special_cases::{
    case51_coefficients, homogeneous_gate, match_case51, solve51_at, Case51Match, Case51Params,
    GateOutcome, HomogeneousAB,
};
use rand_chacha::ChaCha8Rng;

/// Random parameters with |f1|, |f2| in [0.1, 2]; the remaining entries
/// stay in the unit disk.
fn random_case51(rng: &mut ChaCha8Rng) -> Case51Params {
    use rand::Rng;
    let modulus = |rng: &mut ChaCha8Rng| {
        let r = 0.1 + 1.9 * rng.random::<f64>();
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        ComplexScalar::from_polar(r, theta)
    };
    Case51Params {
        f1: modulus(rng),
        f2: modulus(rng),
        g: unit_disk(rng),
        h1: unit_disk(rng),
        h2: unit_disk(rng),
    }
}

#[test]
fn matched_coefficients_roundtrip() {
    let mut rng = rng(13_01);
    for _ in 0..50 {
        let p = random_case51(&mut rng);
        let co = case51_coefficients(&p);
        match match_case51(&co, TOL) {
            Case51Match::Matched(q) => {
                assert!(dist(p.f1, q.f1) < 1e-14);
                assert!(dist(p.f2, q.f2) < 1e-14);
                assert!(dist(p.g, q.g) < 1e-14);
                assert!(dist(p.h1, q.h1) < 1e-14);
                assert!(dist(p.h2, q.h2) < 1e-14);
            }
            Case51Match::Rejected(reasons) => panic!("rejected own pattern: {reasons:?}"),
        }
    }
}

#[test]
fn closed_form_agrees_with_the_integrator() {
    let mut rng = rng(13_02);
    let settings = IntegrationSettings::default();
    let t_grid: Vec<f64> = (0..=25).map(|i| 0.02 * i as f64).collect();
    let mut compared = 0;
    for i in 0..40 {
        let p = random_case51(&mut rng);
        let co = case51_coefficients(&p);
        let x0 = random_x0(&mut rng);
        // The filled-in coefficients are never generic (three of the
        // gating coefficients vanish identically), so the generic
        // pipeline must refuse and the integrator carries the check.
        assert!(reduce(&co, TOL).is_err(), "system {i} unexpectedly generic");
        let numeric = oracle::integrate_grid(&co, &x0, &t_grid, &settings);
        for (&t, num) in t_grid.iter().zip(numeric.iter()) {
            let analytic = match solve51_at(&p, &x0, t, TOL) {
                Ok(a) => a,
                Err(_) => continue,
            };
            if analytic.x1.norm().max(analytic.x2.norm()) > 1e3 {
                continue;
            }
            if let Ok(num) = num {
                assert!(dist(analytic.x1, num.x1) <= 1e-6, "system {i}, t = {t}");
                assert!(dist(analytic.x2, num.x2) <= 1e-6, "system {i}, t = {t}");
                compared += 1;
            }
        }
    }
    assert!(compared > 400, "too few comparable points: {compared}");
}

#[test]
fn relabeling_symmetry_swaps_the_trajectory() {
    // Swapping the two state variables maps the family onto itself with
    // relabeled parameters; solving the swapped system from the swapped
    // initial state reproduces the swapped trajectory.
    let mut rng = rng(13_03);
    let settings = IntegrationSettings::default();
    for _ in 0..25 {
        let p = random_case51(&mut rng);
        let co = case51_coefficients(&p);
        let swapped_co = quadode_core::symmetry_transform(&co);
        let x0 = random_x0(&mut rng);
        let swapped_x0 = InitialState { x1: x0.x2, x2: x0.x1 };
        let t = 0.3;
        let direct = match solve51_at(&p, &x0, t, TOL) {
            Ok(d) if d.x1.norm().max(d.x2.norm()) < 1e3 => d,
            _ => continue,
        };
        // The swapped system leaves the restricted-coupling pattern, so
        // check it numerically.
        let swapped = match oracle::integrate(&swapped_co, &swapped_x0, t, &settings) {
            Ok(s) => s,
            Err(_) => continue,
        };
        assert!(dist(direct.x1, swapped.x2) <= 1e-6);
        assert!(dist(direct.x2, swapped.x1) <= 1e-6);
    }
}

#[test]
fn gate_residual_polynomial_has_exactly_two_zeros() {
    // With b = 0 the second constraint reduces to 2a(2a - 1): only
    // a = 0 and a = 1/2 survive.
    for k in 0..200 {
        let a = -1.0 + 0.01 * k as f64;
        let gate = homogeneous_gate(&HomogeneousAB { a: cplx(a, 0.0), b: cplx(0.0, 0.0) }, TOL);
        let should_pass = a == 0.0 || a == 0.5;
        match gate {
            GateOutcome::Admissible { .. } => assert!(should_pass, "a = {a} slipped through"),
            GateOutcome::Rejected { .. } => assert!(!should_pass, "a = {a} wrongly rejected"),
        }
    }
}
