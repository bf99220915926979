//! Construction of the 12 coefficients of the coupled planar quadratic
//! system from 10 structural parameters: a 2x2 mixing matrix plus one set
//! of scalar quadratic rates per auxiliary variable. Every system built
//! this way is solvable in closed form, and its coefficients satisfy the
//! four algebraic constraints checked in [`crate::inverse_map`].

use crate::algebra::{cplx, ComplexScalar, Tolerance};
use crate::error::{Error, Result};
use crate::riccati::RiccatiParams;

/// The 10 structural parameters behind a solvable system.
///
/// The observable state mixes two auxiliary variables,
/// `x_n = mixing[n][0] * y_1 + mixing[n][1] * y_2`, and each auxiliary
/// variable follows its own decoupled scalar quadratic flow `rates[n]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralParams {
    pub mixing: [[ComplexScalar; 2]; 2],
    pub rates: [RiccatiParams; 2],
}

impl StructuralParams {
    /// Determinant of the mixing matrix.
    pub fn det(&self) -> ComplexScalar {
        self.mixing[0][0] * self.mixing[1][1] - self.mixing[0][1] * self.mixing[1][0]
    }

    /// The same system with the two state variables relabeled: rows and
    /// columns of the mixing matrix swap together with the rate sets.
    pub fn swapped(&self) -> Self {
        Self {
            mixing: [
                [self.mixing[1][1], self.mixing[1][0]],
                [self.mixing[0][1], self.mixing[0][0]],
            ],
            rates: [self.rates[1], self.rates[0]],
        }
    }
}

/// Coefficients of the coupled system
///
/// ```text
/// x_n' = c[n][0] x1^2 + c[n][1] x1 x2 + c[n][2] x2^2
///      + c[n][3] x1   + c[n][4] x2   + c[n][5],        n = 0, 1.
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub c: [[ComplexScalar; 6]; 2],
}

impl Coefficients {
    pub fn zero() -> Self {
        Self { c: [[cplx(0.0, 0.0); 6]; 2] }
    }

    /// Right-hand side of the system at the given state.
    pub fn rhs(&self, x1: ComplexScalar, x2: ComplexScalar) -> (ComplexScalar, ComplexScalar) {
        let monomials = [x1 * x1, x1 * x2, x2 * x2, x1, x2, cplx(1.0, 0.0)];
        let row = |n: usize| {
            self.c[n].iter().zip(monomials.iter()).map(|(cj, m)| cj * m).sum::<ComplexScalar>()
        };
        (row(0), row(1))
    }

    /// Largest coefficient magnitude; the natural scale for zero tests.
    pub fn magnitude(&self) -> f64 {
        self.c.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// All coefficients multiplied by a common factor. Useful because the
    /// solvability constraints are homogeneous: scaled coefficients stay
    /// admissible and trace the same orbits at rescaled time.
    pub fn scaled(&self, factor: ComplexScalar) -> Self {
        let mut out = *self;
        for row in out.c.iter_mut() {
            for v in row.iter_mut() {
                *v *= factor;
            }
        }
        out
    }
}

impl Default for Coefficients {
    fn default() -> Self {
        Self::zero()
    }
}

/// Build the 12 coefficients from structural parameters.
///
/// Fails with [`Error::DeterminantZero`] when the mixing matrix is
/// singular; no other restriction applies.
pub fn forward(sp: &StructuralParams, tol: Tolerance) -> Result<Coefficients> {
    let m11 = sp.mixing[0][0];
    let m12 = sp.mixing[0][1];
    let m21 = sp.mixing[1][0];
    let m22 = sp.mixing[1][1];
    let det = sp.det();
    // Cancellation scale of the determinant, not the raw entry scale.
    let det_scale = (m11 * m22).norm().max((m12 * m21).norm());
    if det.norm() <= tol.threshold(det_scale) {
        return Err(Error::DeterminantZero { det_mag: det.norm() });
    }
    let det2 = det * det;
    let r1 = sp.rates[0];
    let r2 = sp.rates[1];

    let mut c = Coefficients::zero();
    c.c[0][0] = (r1.a2 * m11 * m22 * m22 + r2.a2 * m12 * m21 * m21) / det2;
    c.c[0][1] = -2.0 * m11 * m12 * (r1.a2 * m22 + r2.a2 * m21) / det2;
    c.c[0][2] = m11 * m12 * (r1.a2 * m12 + r2.a2 * m11) / det2;
    c.c[0][3] = (r1.a1 * m11 * m22 - r2.a1 * m12 * m21) / det;
    c.c[0][4] = -(r1.a1 - r2.a1) * m11 * m12 / det;
    c.c[0][5] = r1.a0 * m11 + r2.a0 * m12;

    c.c[1][2] = (r2.a2 * m22 * m11 * m11 + r1.a2 * m21 * m12 * m12) / det2;
    c.c[1][1] = -2.0 * m22 * m21 * (r2.a2 * m11 + r1.a2 * m12) / det2;
    c.c[1][0] = m22 * m21 * (r2.a2 * m21 + r1.a2 * m22) / det2;
    c.c[1][4] = (r2.a1 * m11 * m22 - r1.a1 * m12 * m21) / det;
    c.c[1][3] = -(r2.a1 - r1.a1) * m22 * m21 / det;
    c.c[1][5] = r2.a0 * m22 + r1.a0 * m21;
    Ok(c)
}

/// The coefficient swap induced by relabeling the two state variables.
/// Applying it twice returns the original coefficients, and it preserves
/// the four solvability constraints.
pub fn symmetry_transform(co: &Coefficients) -> Coefficients {
    let a = &co.c[0];
    let b = &co.c[1];
    Coefficients { c: [[b[2], b[1], b[0], b[4], b[3], b[5]], [a[2], a[1], a[0], a[4], a[3], a[5]]] }
}
