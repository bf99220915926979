//! Fixed systems shared by the benchmarks.

use quadode_core::algebra::cplx;
use quadode_core::forward_map::{forward, Coefficients, StructuralParams};
use quadode_core::riccati::RiccatiParams;
use quadode_core::solver::InitialState;
use quadode_core::Tolerance;

pub const TOL: Tolerance = Tolerance { abs_tol: 1e-12, rel_tol: 1e-9 };

/// A well-conditioned generic system with complex mixing and rates.
pub fn demo_structural() -> StructuralParams {
    StructuralParams {
        mixing: [[cplx(0.9, 0.2), cplx(-0.4, 0.7)], [cplx(0.3, -0.6), cplx(0.8, 0.1)]],
        rates: [
            RiccatiParams::new(cplx(0.7, -0.1), cplx(-0.2, 0.3), cplx(0.4, 0.2)),
            RiccatiParams::new(cplx(-0.5, 0.4), cplx(0.6, -0.2), cplx(-0.3, 0.1)),
        ],
    }
}

pub fn demo_coefficients() -> Coefficients {
    forward(&demo_structural(), TOL).expect("demo mixing matrix is regular")
}

pub fn demo_x0() -> InitialState {
    InitialState { x1: cplx(0.31, -0.12), x2: cplx(-0.22, 0.27) }
}
