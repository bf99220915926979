//! Closed-form flow of the scalar quadratic ODE
//! `y' = a2*y^2 + a1*y + a0`, including the degenerate branches
//! (double root, affine, constant) on which the generic quotient
//! formula is indeterminate.

use crate::algebra::{approx_eq, cplx, csqrt_principal, ComplexScalar, Tolerance};
use crate::error::{Error, Result};

/// Coefficients of the scalar quadratic ODE `y' = a2*y^2 + a1*y + a0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiParams {
    pub a2: ComplexScalar,
    pub a1: ComplexScalar,
    pub a0: ComplexScalar,
}

impl RiccatiParams {
    pub fn new(a2: ComplexScalar, a1: ComplexScalar, a0: ComplexScalar) -> Self {
        Self { a2, a1, a0 }
    }

    /// Right-hand side of the scalar ODE.
    pub fn rhs(&self, y: ComplexScalar) -> ComplexScalar {
        self.a2 * y * y + self.a1 * y + self.a0
    }
}

/// Which closed form applies for a given parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiccatiBranch {
    /// Quadratic right-hand side with two distinct roots.
    Generic,
    /// Quadratic right-hand side with a repeated root (`beta = 0`).
    DoubleRoot,
    /// Vanishing quadratic coefficient: affine ODE.
    Linear,
    /// Vanishing quadratic and linear coefficients.
    Constant,
}

/// Reduced data driving the closed-form flow.
///
/// For `Generic`, `y_plus`/`y_minus` are the two fixed points of the flow
/// and `beta` the exponent, with `beta = a2 * (y_plus - y_minus)`. For
/// `DoubleRoot` both roots coincide and `beta` is exactly zero. For
/// `Linear` both root fields hold the single equilibrium `-a0/a1` and
/// `beta` holds the deviation rate `a1`. For `Constant` the fields are
/// zero and unused.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiSolution {
    pub y_plus: ComplexScalar,
    pub y_minus: ComplexScalar,
    pub beta: ComplexScalar,
    pub branch: RiccatiBranch,
}

/// Long-time behavior of a flow for real time, `t -> +infinity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Asymptote {
    ConvergesTo(ComplexScalar),
    NoLimit,
    Periodic,
}

/// A flow denominator whose magnitude drops below this factor times the
/// scale of the terms feeding it counts as a pole; returning the huge
/// quotient instead would silently corrupt downstream verification.
const POLE_FACTOR: f64 = 1e-10;

/// Reduce ODE parameters to roots, exponent, and branch. Total: every
/// parameter set maps to one of the four branches.
pub fn reduce(p: &RiccatiParams, tol: Tolerance) -> RiccatiSolution {
    let scale = p.a2.norm().max(p.a1.norm()).max(p.a0.norm());
    let thr = tol.threshold(scale);
    let zero = cplx(0.0, 0.0);
    if p.a2.norm() > thr {
        let beta = csqrt_principal(p.a1 * p.a1 - 4.0 * p.a0 * p.a2);
        if beta.norm() > thr {
            RiccatiSolution {
                y_plus: (-p.a1 + beta) / (2.0 * p.a2),
                y_minus: (-p.a1 - beta) / (2.0 * p.a2),
                beta,
                branch: RiccatiBranch::Generic,
            }
        } else {
            let root = -p.a1 / (2.0 * p.a2);
            RiccatiSolution {
                y_plus: root,
                y_minus: root,
                beta: zero,
                branch: RiccatiBranch::DoubleRoot,
            }
        }
    } else if p.a1.norm() > thr {
        let eq = -p.a0 / p.a1;
        RiccatiSolution { y_plus: eq, y_minus: eq, beta: p.a1, branch: RiccatiBranch::Linear }
    } else {
        RiccatiSolution { y_plus: zero, y_minus: zero, beta: zero, branch: RiccatiBranch::Constant }
    }
}

/// Evaluate the flow started at `y0` after time `t`.
///
/// Requires `sol = reduce(p)`. Fails with [`Error::PoleAtTime`] when the
/// closed-form denominator vanishes (finite-time blow-up).
pub fn flow_at(
    sol: &RiccatiSolution,
    p: &RiccatiParams,
    y0: ComplexScalar,
    t: f64,
    tol: Tolerance,
) -> Result<ComplexScalar> {
    if t == 0.0 {
        return Ok(y0);
    }
    match sol.branch {
        RiccatiBranch::Generic => {
            // Starting exactly on a fixed point must short-circuit the
            // quotient, which would otherwise evaluate 0/0.
            if approx_eq(y0, sol.y_plus, tol) {
                return Ok(sol.y_plus);
            }
            if approx_eq(y0, sol.y_minus, tol) {
                return Ok(sol.y_minus);
            }
            let dp = y0 - sol.y_plus;
            let dm = y0 - sol.y_minus;
            let bt = sol.beta * t;
            // Attach exp(beta t) to whichever side keeps its magnitude
            // at most one, so large |Re(beta t)| never overflows.
            let (n1, n2, d1, d2) = if bt.re <= 0.0 {
                let e = bt.exp();
                (sol.y_plus * dm, sol.y_minus * dp * e, dm, dp * e)
            } else {
                let e = (-bt).exp();
                (sol.y_plus * dm * e, sol.y_minus * dp, dm * e, dp)
            };
            let den = d1 - d2;
            let scale = n1.norm().max(n2.norm()).max(d1.norm()).max(d2.norm());
            if den.norm() < POLE_FACTOR * scale {
                return Err(Error::PoleAtTime { t });
            }
            Ok((n1 - n2) / den)
        }
        RiccatiBranch::DoubleRoot => {
            let star = sol.y_plus;
            if approx_eq(y0, star, tol) {
                return Ok(star);
            }
            let u0 = y0 - star;
            let drift = p.a2 * u0 * t;
            let den = 1.0 - drift;
            if den.norm() < POLE_FACTOR * 1.0f64.max(drift.norm()) {
                return Err(Error::PoleAtTime { t });
            }
            Ok(star + u0 / den)
        }
        RiccatiBranch::Linear => {
            let eq = sol.y_plus;
            if approx_eq(y0, eq, tol) {
                return Ok(eq);
            }
            Ok(eq + (y0 - eq) * (p.a1 * t).exp())
        }
        RiccatiBranch::Constant => Ok(y0 + p.a0 * t),
    }
}

/// Long-time behavior of the flow, read off the exponent.
pub fn asymptote(sol: &RiccatiSolution, tol: Tolerance) -> Asymptote {
    let thr = tol.threshold(sol.beta.norm());
    match sol.branch {
        RiccatiBranch::Generic => {
            if sol.beta.re < -thr {
                Asymptote::ConvergesTo(sol.y_plus)
            } else if sol.beta.re > thr {
                Asymptote::ConvergesTo(sol.y_minus)
            } else if sol.beta.im.abs() > thr {
                Asymptote::Periodic
            } else {
                Asymptote::NoLimit
            }
        }
        // Algebraic decay toward the repeated root.
        RiccatiBranch::DoubleRoot => Asymptote::ConvergesTo(sol.y_plus),
        RiccatiBranch::Linear => {
            if sol.beta.re < -thr {
                Asymptote::ConvergesTo(sol.y_plus)
            } else if sol.beta.im.abs() > thr && sol.beta.re.abs() <= thr {
                Asymptote::Periodic
            } else {
                Asymptote::NoLimit
            }
        }
        RiccatiBranch::Constant => Asymptote::NoLimit,
    }
}
