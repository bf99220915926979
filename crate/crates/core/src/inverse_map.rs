//! Admissibility check and reduction of given coefficients to the
//! closed-form ingredients: the auxiliary roots `z_n`, the decoupled
//! quadratic rates `alpha_n`, and their fixed points and exponents.
//!
//! The reduction inverts the construction in [`crate::forward_map`]; it
//! exists exactly when the coefficients satisfy four algebraic
//! constraints and avoid a handful of degeneracies.

use crate::algebra::{csqrt_principal, ComplexScalar, Tolerance};
use crate::error::{Error, Result};
use crate::forward_map::{Coefficients, StructuralParams};
use crate::riccati::{self, RiccatiParams, RiccatiSolution};

/// Nonvanishing and nondegeneracy conditions the generic reduction
/// relies on. Systems failing any of them are rejected as nongeneric;
/// some are handled by [`crate::special_cases`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericityFlags {
    /// `c[1][0]` (the x1^2 coefficient of the second equation) is nonzero.
    pub c21_nonzero: bool,
    /// `c[0][1]` (the cross-term coefficient of the first equation) is nonzero.
    pub c12_nonzero: bool,
    /// `c[1][3]` (the x1 coefficient of the second equation) is nonzero.
    pub c24_nonzero: bool,
    /// The discriminant of the quadratic root formula does not vanish
    /// (distinct roots from the second-degree coefficients).
    pub ineq1: bool,
    /// The discriminant of the independent first-degree root formula
    /// does not vanish.
    pub ineq2: bool,
}

impl GenericityFlags {
    pub fn all(&self) -> bool {
        self.c21_nonzero && self.c12_nonzero && self.c24_nonzero && self.ineq1 && self.ineq2
    }
}

/// Outcome of the admissibility check: the four normalized constraint
/// residuals plus the genericity flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    pub residuals: [ComplexScalar; 4],
    pub satisfied: bool,
    pub flags: GenericityFlags,
}

impl ConstraintReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }
}

/// Everything needed to evaluate the closed-form solution: the two
/// auxiliary roots `z`, the decoupled rates `alpha[n]`, and per variable
/// the reduced flow (`flows[n]` carries the fixed points `w_n+/-`, the
/// exponent `beta_n`, and the branch).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedForm {
    pub z: [ComplexScalar; 2],
    pub alpha: [RiccatiParams; 2],
    pub flows: [RiccatiSolution; 2],
}

impl ReducedForm {
    pub fn beta(&self, n: usize) -> ComplexScalar {
        self.flows[n].beta
    }

    pub fn w_plus(&self, n: usize) -> ComplexScalar {
        self.flows[n].y_plus
    }

    pub fn w_minus(&self, n: usize) -> ComplexScalar {
        self.flows[n].y_minus
    }

    /// The same reduced form with the two auxiliary variables relabeled.
    /// Solver output is invariant under this relabeling.
    pub fn swapped(&self) -> Self {
        Self {
            z: [self.z[1], self.z[0]],
            alpha: [self.alpha[1], self.alpha[0]],
            flows: [self.flows[1], self.flows[0]],
        }
    }
}

/// The two independent root formulas must agree to this relative
/// tolerance; a larger deviation means constraints 3-4 are violated in a
/// way the raw residuals did not catch.
pub const Z_AGREEMENT_TOL: f64 = 1e-6;

/// Sum of monomial terms divided by the largest term magnitude.
/// An empty cancellation (0/0) counts as exactly satisfied.
fn normalized_residual(terms: &[ComplexScalar]) -> ComplexScalar {
    let sum: ComplexScalar = terms.iter().sum();
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        ComplexScalar::new(0.0, 0.0)
    } else {
        sum / scale
    }
}

/// Evaluate the four solvability constraints and the genericity flags.
/// Total diagnostic: never fails.
pub fn check_constraints(co: &Coefficients, tol: Tolerance) -> ConstraintReport {
    let [c11, c12, c13, c14, c15, _c16] = co.c[0];
    let [c21, c22, c23, c24, c25, _c26] = co.c[1];

    let residuals = [
        normalized_residual(&[4.0 * c13 * c21, -(c12 * c22)]),
        normalized_residual(&[-2.0 * c12 * c21, 4.0 * c23 * c21, 2.0 * c11 * c22, -(c22 * c22)]),
        normalized_residual(&[2.0 * c11 * c24, -(c22 * c24), 2.0 * c21 * c25, -2.0 * c21 * c14]),
        normalized_residual(&[c12 * c24, -2.0 * c15 * c21]),
    ];
    let satisfied = residuals.iter().all(|r| r.norm() <= tol.unit());

    let scale = co.magnitude();
    let thr = tol.threshold(scale);
    let disc1 = [(2.0 * c11 - c22) * (2.0 * c11 - c22), 8.0 * c12 * c21];
    let disc2 = [(c14 - c25) * (c14 - c25), 4.0 * c15 * c24];
    let nonvanishing = |terms: [ComplexScalar; 2]| {
        let sum = terms[0] + terms[1];
        sum.norm() > tol.threshold(terms[0].norm().max(terms[1].norm()))
    };
    let flags = GenericityFlags {
        c21_nonzero: c21.norm() > thr,
        c12_nonzero: c12.norm() > thr,
        c24_nonzero: c24.norm() > thr,
        ineq1: nonvanishing(disc1),
        ineq2: nonvanishing(disc2),
    };

    ConstraintReport { residuals, satisfied, flags }
}

/// Relative set-wise deviation between two unordered root pairs.
fn set_deviation(a: [ComplexScalar; 2], b: [ComplexScalar; 2]) -> f64 {
    let rel = |x: ComplexScalar, y: ComplexScalar| {
        (x - y).norm() / x.norm().max(y.norm()).max(f64::MIN_POSITIVE)
    };
    let direct = rel(a[0], b[0]).max(rel(a[1], b[1]));
    let crossed = rel(a[0], b[1]).max(rel(a[1], b[0]));
    direct.min(crossed)
}

/// Reduce admissible coefficients to the closed-form ingredients.
///
/// Branch convention: `z[0]` takes the minus sign in front of the
/// principal root. Downstream output is invariant under relabeling,
/// so the choice is a canonicalization, not semantics.
pub fn reduce(co: &Coefficients, tol: Tolerance) -> Result<ReducedForm> {
    let report = check_constraints(co, tol);
    if !report.satisfied {
        return Err(Error::ConstraintViolated { max_residual: report.max_residual() });
    }
    if !report.flags.c21_nonzero {
        return Err(Error::NonGeneric {
            reason: "x1^2 coefficient of the second equation vanishes".into(),
        });
    }
    if !report.flags.c12_nonzero {
        return Err(Error::NonGeneric {
            reason: "cross-term coefficient of the first equation vanishes".into(),
        });
    }
    if !report.flags.c24_nonzero {
        return Err(Error::NonGeneric {
            reason: "x1 coefficient of the second equation vanishes".into(),
        });
    }
    if !report.flags.ineq1 || !report.flags.ineq2 {
        return Err(Error::DegenerateZ);
    }

    let [c11, c12, c13, c14, c15, c16] = co.c[0];
    let [c21, c22, c23, c24, c25, c26] = co.c[1];

    // Primary root formula, from the second-degree coefficients.
    let b = 2.0 * c11 - c22;
    let s = csqrt_principal(b * b + 8.0 * c12 * c21);
    let z1 = (b - s) / (4.0 * c21);
    let z2 = (b + s) / (4.0 * c21);

    // Independent root formula, from the first-degree coefficients.
    let b2 = c14 - c25;
    let s2 = csqrt_principal(b2 * b2 + 4.0 * c15 * c24);
    let z_alt = [(b2 - s2) / (2.0 * c24), (b2 + s2) / (2.0 * c24)];

    let deviation = set_deviation([z1, z2], z_alt);
    if deviation > Z_AGREEMENT_TOL {
        return Err(Error::ZMismatch { deviation });
    }
    if (z1 - z2).norm() <= tol.threshold(z1.norm().max(z2.norm())) {
        return Err(Error::DegenerateZ);
    }

    let dz = z1 - z2;
    let alpha = [
        RiccatiParams {
            a2: (z1 * z1 * (c11 - z2 * c21) + z1 * (c12 - z2 * c22) + c13 - z2 * c23) / dz,
            a1: (z1 * (c14 - z2 * c24) + c15 - z2 * c25) / dz,
            a0: (c16 - z2 * c26) / dz,
        },
        RiccatiParams {
            a2: ((-c13 + z1 * c23) + z2 * (-c12 + z1 * c22) + z2 * z2 * (-c11 + z1 * c21)) / dz,
            a1: (-c15 + z1 * c25 + z2 * (-c14 + z1 * c24)) / dz,
            a0: (-c16 + z1 * c26) / dz,
        },
    ];
    let flows = [riccati::reduce(&alpha[0], tol), riccati::reduce(&alpha[1], tol)];
    Ok(ReducedForm { z: [z1, z2], alpha, flows })
}

/// Normalized residuals of the four derivation identities, each evaluated
/// at both roots (eight values: cubic, quadratic, independent quadratic,
/// linear; first at `z[0]`, then at `z[1]`). All must vanish on
/// admissible inputs; they are diagnostics, not an alternative solver.
pub fn residual_suite(co: &Coefficients, rf: &ReducedForm) -> [ComplexScalar; 8] {
    let [c11, c12, c13, c14, c15, _c16] = co.c[0];
    let [c21, c22, c23, c24, c25, _c26] = co.c[1];

    let cubic = |z: ComplexScalar| {
        normalized_residual(&[
            c21 * z * z * z,
            c22 * z * z,
            -(c11 * z * z),
            c23 * z,
            -(c12 * z),
            -c13,
        ])
    };
    let quadratic =
        |z: ComplexScalar| normalized_residual(&[2.0 * c21 * z * z, -2.0 * c11 * z, c22 * z, -c12]);
    let quadratic_alt =
        |z: ComplexScalar| normalized_residual(&[c24 * z * z, c25 * z, -(c14 * z), -c15]);
    let linear = |z: ComplexScalar| {
        normalized_residual(&[
            -2.0 * c11 * c24 * z,
            c22 * c24 * z,
            -2.0 * c21 * c25 * z,
            2.0 * c21 * c14 * z,
            -(c12 * c24),
            2.0 * c15 * c21,
        ])
    };

    [
        cubic(rf.z[0]),
        cubic(rf.z[1]),
        quadratic(rf.z[0]),
        quadratic(rf.z[1]),
        quadratic_alt(rf.z[0]),
        quadratic_alt(rf.z[1]),
        linear(rf.z[0]),
        linear(rf.z[1]),
    ]
}

/// Rebuild structural parameters from a reduced form, for any choice of
/// the two free nonzero scaling parameters. The mixing matrix carries the
/// scalings in its second row; observable trajectories do not depend on
/// them.
pub fn structural_from_reduced(
    rf: &ReducedForm,
    lambda1: ComplexScalar,
    lambda2: ComplexScalar,
) -> Result<StructuralParams> {
    if lambda1.norm() == 0.0 || lambda2.norm() == 0.0 {
        return Err(Error::InvalidLambda);
    }
    let scale = |n: usize, lambda: ComplexScalar| RiccatiParams {
        a2: lambda * rf.alpha[n].a2,
        a1: rf.alpha[n].a1,
        a0: rf.alpha[n].a0 / lambda,
    };
    Ok(StructuralParams {
        mixing: [[rf.z[0] * lambda1, rf.z[1] * lambda2], [lambda1, lambda2]],
        rates: [scale(0, lambda1), scale(1, lambda2)],
    })
}

/// Reduced form read directly off structural parameters, bypassing the
/// coefficient-space formulas. This covers systems whose coefficients are
/// nongeneric (so [`reduce`] refuses them) but whose structural origin is
/// known, e.g. for classification.
pub fn reduced_from_structural(sp: &StructuralParams, tol: Tolerance) -> Result<ReducedForm> {
    let m11 = sp.mixing[0][0];
    let m12 = sp.mixing[0][1];
    let m21 = sp.mixing[1][0];
    let m22 = sp.mixing[1][1];
    let det = sp.det();
    if det.norm() <= tol.threshold((m11 * m22).norm().max((m12 * m21).norm())) {
        return Err(Error::DeterminantZero { det_mag: det.norm() });
    }
    let scale = [m11, m12, m21, m22].iter().map(|m| m.norm()).fold(0.0, f64::max);
    let thr = tol.threshold(scale);
    if m21.norm() <= thr || m22.norm() <= thr {
        return Err(Error::NonGeneric { reason: "second mixing row has a vanishing entry".into() });
    }
    let z = [m11 / m21, m12 / m22];
    if (z[0] - z[1]).norm() <= tol.threshold(z[0].norm().max(z[1].norm())) {
        return Err(Error::DegenerateZ);
    }
    let unscale = |n: usize, lambda: ComplexScalar| RiccatiParams {
        a2: sp.rates[n].a2 / lambda,
        a1: sp.rates[n].a1,
        a0: sp.rates[n].a0 * lambda,
    };
    let alpha = [unscale(0, m21), unscale(1, m22)];
    let flows = [riccati::reduce(&alpha[0], tol), riccati::reduce(&alpha[1], tol)];
    Ok(ReducedForm { z, alpha, flows })
}
