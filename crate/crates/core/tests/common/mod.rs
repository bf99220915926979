//! Shared generators and comparison helpers for the integration suites.
//!
//! Random structural parameters use uniform complex entries in the unit
//! disk with rejection thresholds (|det| and |a_n2| above 1e-3). The
//! thresholds are test-harness policy, not library limits.
#![allow(dead_code)] // each test binary uses its own subset

use quadode_core::algebra::ComplexScalar;
use quadode_core::forward_map::{forward, Coefficients, StructuralParams};
use quadode_core::riccati::RiccatiParams;
use quadode_core::solver::InitialState;
use quadode_core::Tolerance;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const TOL: Tolerance = Tolerance { abs_tol: 1e-12, rel_tol: 1e-9 };

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample from the closed complex unit disk.
pub fn unit_disk(rng: &mut ChaCha8Rng) -> ComplexScalar {
    let r = rng.random::<f64>().sqrt();
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    ComplexScalar::from_polar(r, theta)
}

/// Random structural parameters, rejecting near-singular mixing and
/// near-degenerate quadratic rates.
pub fn random_structural(rng: &mut ChaCha8Rng) -> StructuralParams {
    loop {
        let sp = StructuralParams {
            mixing: [[unit_disk(rng), unit_disk(rng)], [unit_disk(rng), unit_disk(rng)]],
            rates: [
                RiccatiParams::new(unit_disk(rng), unit_disk(rng), unit_disk(rng)),
                RiccatiParams::new(unit_disk(rng), unit_disk(rng), unit_disk(rng)),
            ],
        };
        if sp.det().norm() > 1e-3 && sp.rates[0].a2.norm() > 1e-3 && sp.rates[1].a2.norm() > 1e-3 {
            return sp;
        }
    }
}

/// A random solvable system together with its structural origin.
pub fn random_admissible(rng: &mut ChaCha8Rng) -> (StructuralParams, Coefficients) {
    let sp = random_structural(rng);
    let co = forward(&sp, TOL).expect("rejection sampling keeps det away from zero");
    (sp, co)
}

/// Random initial state in the unit bidisk.
pub fn random_x0(rng: &mut ChaCha8Rng) -> InitialState {
    InitialState { x1: unit_disk(rng), x2: unit_disk(rng) }
}

pub fn dist(a: ComplexScalar, b: ComplexScalar) -> f64 {
    (a - b).norm()
}

/// Set-wise distance between unordered pairs, relative to their scale.
pub fn set_deviation(a: [ComplexScalar; 2], b: [ComplexScalar; 2]) -> f64 {
    let rel = |x: ComplexScalar, y: ComplexScalar| {
        (x - y).norm() / x.norm().max(y.norm()).max(f64::MIN_POSITIVE)
    };
    let direct = rel(a[0], b[0]).max(rel(a[1], b[1]));
    let crossed = rel(a[0], b[1]).max(rel(a[1], b[0]));
    direct.min(crossed)
}
