//! Two families the generic reduction refuses but that still admit
//! closed forms: the restricted-coupling subcase in which each equation's
//! quadratic self-coupling pattern is constrained (no pure cross-only
//! forcing terms), and the fully homogeneous system with its two-parameter
//! normal form plus the exponential time-rescaling extension.

use crate::algebra::{ComplexScalar, Tolerance};
use crate::error::{Error, Result};
use crate::forward_map::Coefficients;
use crate::inverse_map::{self, check_constraints};
use crate::oracle::{self, IntegrationSettings};
use crate::riccati::{self, RiccatiParams, RiccatiSolution};
use crate::solver::{self, InitialState, TrajectoryPoint};

/// Parameters of the restricted-coupling system
///
/// ```text
/// x1' = x1 (f1 x1 + g) + h1,
/// x2' = x2 (2 f1 x1 + f2 x2 + g) + h2.
/// ```
///
/// Both `f1` and `f2` must be nonzero: the closed form divides by each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case51Params {
    pub f1: ComplexScalar,
    pub f2: ComplexScalar,
    pub g: ComplexScalar,
    pub h1: ComplexScalar,
    pub h2: ComplexScalar,
}

/// Reduced data for the restricted-coupling system: the two decoupled
/// rate sets `eta[n]` and their reduced flows (`flows[n]` carries the
/// fixed points `xi_n+/-` and the exponent `gamma_n`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case51Reduced {
    pub eta: [RiccatiParams; 2],
    pub flows: [RiccatiSolution; 2],
}

impl Case51Reduced {
    pub fn gamma(&self, n: usize) -> ComplexScalar {
        self.flows[n].beta
    }

    pub fn xi_plus(&self, n: usize) -> ComplexScalar {
        self.flows[n].y_plus
    }

    pub fn xi_minus(&self, n: usize) -> ComplexScalar {
        self.flows[n].y_minus
    }
}

/// Outcome of matching raw coefficients against the restricted-coupling
/// pattern.
#[derive(Debug, Clone, PartialEq)]
pub enum Case51Match {
    Matched(Case51Params),
    /// Not this family; each entry names one failed condition.
    Rejected(Vec<String>),
}

/// The two parameters of the homogeneous normal form
/// `x1' = x1 x2`, `x2' = a (x1^2 + x2^2) + b x1 x2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousAB {
    pub a: ComplexScalar,
    pub b: ComplexScalar,
}

/// Gate outcome for the homogeneous normal form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateOutcome {
    Admissible { a: ComplexScalar, b: ComplexScalar },
    Rejected { residuals: [ComplexScalar; 4] },
}

/// Try to read coefficients as a restricted-coupling system. Requires the
/// zero pattern (no x2^2/x2 terms in the first equation, no x1^2/x1 terms
/// in the second, no cross term in the first) plus the two solvability
/// relations `c22 = 2 c11` and `c14 = c25`, all within tolerance.
pub fn match_case51(co: &Coefficients, tol: Tolerance) -> Case51Match {
    let thr = tol.threshold(co.magnitude());
    let [c11, c12, c13, c14, c15, c16] = co.c[0];
    let [c21, c22, c23, c24, c25, c26] = co.c[1];

    let mut reasons = Vec::new();
    let mut require_zero = |v: ComplexScalar, label: &str| {
        if v.norm() > thr {
            reasons.push(format!("{label} must vanish"));
        }
    };
    require_zero(c13, "x2^2 coefficient of the first equation");
    require_zero(c15, "x2 coefficient of the first equation");
    require_zero(c21, "x1^2 coefficient of the second equation");
    require_zero(c24, "x1 coefficient of the second equation");
    // Cross-coupled forcing of the first variable (Lotka-Volterra-like
    // models) falls outside this family.
    require_zero(c12, "cross-term coefficient of the first equation (f12 != 0)");
    if (c22 - 2.0 * c11).norm() > thr {
        reasons
            .push("second-equation cross term must be twice the first-equation self term".into());
    }
    if (c14 - c25).norm() > thr {
        reasons.push("the two linear self-coupling rates must be equal".into());
    }
    if c11.norm() <= thr {
        reasons.push("|f1| below tolerance".into());
    }
    if c23.norm() <= thr {
        reasons.push("|f2| below tolerance".into());
    }
    if reasons.is_empty() {
        Case51Match::Matched(Case51Params { f1: c11, f2: c23, g: c14, h1: c16, h2: c26 })
    } else {
        Case51Match::Rejected(reasons)
    }
}

/// Coefficients of the full system described by restricted-coupling
/// parameters (the inverse of [`match_case51`]).
pub fn case51_coefficients(p: &Case51Params) -> Coefficients {
    let zero = ComplexScalar::new(0.0, 0.0);
    Coefficients {
        c: [[p.f1, zero, zero, p.g, zero, p.h1], [zero, 2.0 * p.f1, p.f2, zero, p.g, p.h2]],
    }
}

/// Decoupled rates of the two auxiliary variables of the
/// restricted-coupling closed form.
pub fn reduce51(p: &Case51Params, tol: Tolerance) -> Case51Reduced {
    let ratio = p.f1 / p.f2;
    let eta = [
        RiccatiParams { a2: p.f2, a1: p.g, a0: ratio * p.h1 + p.h2 },
        RiccatiParams { a2: -p.f2, a1: p.g, a0: -(ratio * p.h1) },
    ];
    let flows = [riccati::reduce(&eta[0], tol), riccati::reduce(&eta[1], tol)];
    Case51Reduced { eta, flows }
}

/// Closed-form solution of the restricted-coupling system at one time.
/// At `t = 0` the initial state is returned exactly.
pub fn solve51_at(
    p: &Case51Params,
    x0: &InitialState,
    t: f64,
    tol: Tolerance,
) -> Result<TrajectoryPoint> {
    if t == 0.0 {
        return Ok(TrajectoryPoint { t, x1: x0.x1, x2: x0.x2 });
    }
    let red = reduce51(p, tol);
    let ratio = p.f1 / p.f2;
    let xi1_0 = x0.x2 + ratio * x0.x1;
    let xi2_0 = -(ratio * x0.x1);
    let xi1 = riccati::flow_at(&red.flows[0], &red.eta[0], xi1_0, t, tol)?;
    let xi2 = riccati::flow_at(&red.flows[1], &red.eta[1], xi2_0, t, tol)?;
    Ok(TrajectoryPoint { t, x1: -(p.f2 / p.f1) * xi2, x2: xi1 + xi2 })
}

/// Embed the two homogeneous normal-form parameters as full coefficients:
/// unit cross term in the first equation, `a` on both squares and `b` on
/// the cross term of the second.
pub fn homogeneous_coefficients(ab: &HomogeneousAB) -> Coefficients {
    let zero = ComplexScalar::new(0.0, 0.0);
    let one = ComplexScalar::new(1.0, 0.0);
    Coefficients { c: [[zero, one, zero, zero, zero, zero], [ab.a, ab.b, ab.a, zero, zero, zero]] }
}

/// Run the solvability constraints on the homogeneous normal form.
/// Exactly two parameter points pass: `(a, b) = (0, 0)` and `(1/2, 0)`.
pub fn homogeneous_gate(ab: &HomogeneousAB, tol: Tolerance) -> GateOutcome {
    let report = check_constraints(&homogeneous_coefficients(ab), tol);
    if report.satisfied {
        GateOutcome::Admissible { a: ab.a, b: ab.b }
    } else {
        GateOutcome::Rejected { residuals: report.residuals }
    }
}

/// Solve the exponentially extended system `x_n' = lambda x_n + (pure
/// second-degree terms)` built on homogeneous coefficients.
///
/// The solution is `x_n(t) = exp(lambda t) * zeta_n(tau)` with
/// `tau = (exp(lambda t) - 1)/lambda` (`tau = t` in the `lambda -> 0`
/// limit), where `zeta` follows the unscaled homogeneous system. Because
/// that system is autonomous and homogeneous in the coefficients, the
/// value `zeta(tau)` is computed by flowing coefficients scaled by `tau`
/// over unit time: analytically when the scaled system is admissible and
/// generic, through the numerical integrator otherwise.
pub fn exp_scaling_extend(
    c_hom: &Coefficients,
    lambda: ComplexScalar,
    x0: &InitialState,
    t: f64,
    tol: Tolerance,
    settings: &IntegrationSettings,
) -> Result<TrajectoryPoint> {
    let thr = tol.threshold(c_hom.magnitude());
    for n in 0..2 {
        for j in 3..6 {
            if c_hom.c[n][j].norm() > thr {
                return Err(Error::NonGeneric {
                    reason: "exponential extension requires purely second-degree coefficients"
                        .into(),
                });
            }
        }
    }
    let growth = (lambda * t).exp();
    let one = ComplexScalar::new(1.0, 0.0);
    let tau =
        if lambda.norm() == 0.0 { ComplexScalar::new(t, 0.0) } else { (growth - one) / lambda };
    if tau.norm() == 0.0 {
        return Ok(TrajectoryPoint { t, x1: growth * x0.x1, x2: growth * x0.x2 });
    }

    let scaled = c_hom.scaled(tau);
    let zeta = match inverse_map::reduce(&scaled, tol) {
        Ok(rf) => match solver::solve_at(&rf, x0, 1.0, tol) {
            Ok(p) => (p.x1, p.x2),
            Err(Error::PoleAtTime { t: s }) => {
                return Err(pole_in_original_time(lambda, tau, s, t))
            }
            Err(other) => return Err(other),
        },
        // Nongeneric or constraint-violating scaled systems fall back to
        // the independent integrator over the same rescaled unit span.
        Err(_) => match oracle::integrate(&scaled, x0, 1.0, settings) {
            Ok(p) => (p.x1, p.x2),
            Err(Error::BlowupDetected { t: s }) | Err(Error::StepLimitExceeded { t: s, .. }) => {
                return Err(pole_in_original_time(lambda, tau, s, t))
            }
            Err(other) => return Err(other),
        },
    };
    Ok(TrajectoryPoint { t, x1: growth * zeta.0, x2: growth * zeta.1 })
}

/// Map a pole at fraction `s` of the rescaled unit span back to the time
/// axis of the extended system.
fn pole_in_original_time(
    lambda: ComplexScalar,
    tau: ComplexScalar,
    s: f64,
    t_requested: f64,
) -> Error {
    let tau_star = tau * s;
    let t_star = if lambda.norm() == 0.0 {
        tau_star.re
    } else {
        let arg = ComplexScalar::new(1.0, 0.0) + lambda * tau_star;
        if arg.norm() == 0.0 {
            t_requested
        } else {
            (arg.ln() / lambda).re
        }
    };
    Error::PoleAtTime { t: t_star }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cplx;

    const TOL: Tolerance = Tolerance { abs_tol: 1e-12, rel_tol: 1e-9 };

    fn sample_params() -> Case51Params {
        Case51Params {
            f1: cplx(1.0, 0.0),
            f2: cplx(1.0, 0.0),
            g: cplx(0.0, 0.0),
            h1: cplx(-1.0, 0.0),
            h2: cplx(0.0, 0.0),
        }
    }

    #[test]
    fn matches_the_spelled_out_pattern() {
        let co = case51_coefficients(&sample_params());
        match match_case51(&co, TOL) {
            Case51Match::Matched(p) => {
                assert_eq!(p.f1, cplx(1.0, 0.0));
                assert_eq!(p.f2, cplx(1.0, 0.0));
                assert_eq!(p.g, cplx(0.0, 0.0));
                assert_eq!(p.h1, cplx(-1.0, 0.0));
                assert_eq!(p.h2, cplx(0.0, 0.0));
            }
            Case51Match::Rejected(reasons) => panic!("unexpected rejection: {reasons:?}"),
        }
    }

    #[test]
    fn rejects_cross_coupled_forcing() {
        let mut co = case51_coefficients(&sample_params());
        co.c[0][1] = cplx(1.0, 0.0); // Lotka-Volterra-like cross term
        match match_case51(&co, TOL) {
            Case51Match::Rejected(reasons) => {
                assert!(reasons.iter().any(|r| r.contains("f12")), "{reasons:?}");
            }
            Case51Match::Matched(_) => panic!("should not match"),
        }
    }

    #[test]
    fn rejects_all_zero() {
        match match_case51(&Coefficients::zero(), TOL) {
            Case51Match::Rejected(reasons) => {
                assert!(reasons.iter().any(|r| r.contains("f1")), "{reasons:?}");
            }
            Case51Match::Matched(_) => panic!("should not match"),
        }
    }

    #[test]
    fn reduced_rates_match_hand_values() {
        // f1 = f2 = 1, g = 0, h1 = -1, h2 = 0:
        // eta1 = (1, 0, -1) with gamma1 = 2; eta2 = (-1, 0, 1), gamma2 = 2.
        let red = reduce51(&sample_params(), TOL);
        assert_eq!(red.eta[0].a0, cplx(-1.0, 0.0));
        assert_eq!(red.eta[1].a0, cplx(1.0, 0.0));
        assert!((red.gamma(0) - cplx(2.0, 0.0)).norm() < 1e-14);
        assert!((red.gamma(1) - cplx(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn solve51_time_zero_identity() {
        let p = sample_params();
        let x0 = InitialState { x1: cplx(0.3, 0.1), x2: cplx(-0.2, 0.4) };
        let out = solve51_at(&p, &x0, 0.0, TOL).unwrap();
        assert_eq!(out.x1, x0.x1);
        assert_eq!(out.x2, x0.x2);
    }

    #[test]
    fn solve51_agrees_with_the_integrator() {
        let p = sample_params();
        let co = case51_coefficients(&p);
        let x0 = InitialState { x1: cplx(0.0, 0.0), x2: cplx(0.4, 0.0) };
        let settings = IntegrationSettings::default();
        for k in 1..=5 {
            let t = 0.1 * k as f64;
            let analytic = solve51_at(&p, &x0, t, TOL).unwrap();
            let numeric = oracle::integrate(&co, &x0, t, &settings).unwrap();
            assert!((analytic.x1 - numeric.x1).norm() < 1e-8, "t = {t}");
            assert!((analytic.x2 - numeric.x2).norm() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn equilibrium_of_second_flow_freezes_x1() {
        // Starting the second auxiliary variable on its fixed point makes
        // x1 constant.
        let p = sample_params();
        let red = reduce51(&p, TOL);
        let xi2_star = red.xi_plus(1);
        // xi2(0) = -(f1/f2) x1(0) = xi2_star  =>  x1(0) = -xi2_star.
        let x0 = InitialState { x1: -xi2_star, x2: cplx(0.25, 0.0) };
        let first = solve51_at(&p, &x0, 0.4, TOL).unwrap();
        let second = solve51_at(&p, &x0, 1.3, TOL).unwrap();
        assert!((first.x1 - x0.x1).norm() < 1e-12);
        assert!((second.x1 - x0.x1).norm() < 1e-12);
    }

    #[test]
    fn gate_passes_exactly_the_two_known_points() {
        let pass1 = HomogeneousAB { a: cplx(0.0, 0.0), b: cplx(0.0, 0.0) };
        let pass2 = HomogeneousAB { a: cplx(0.5, 0.0), b: cplx(0.0, 0.0) };
        assert!(matches!(homogeneous_gate(&pass1, TOL), GateOutcome::Admissible { .. }));
        assert!(matches!(homogeneous_gate(&pass2, TOL), GateOutcome::Admissible { .. }));

        let fail = HomogeneousAB { a: cplx(0.5, 0.0), b: cplx(0.1, 0.0) };
        match homogeneous_gate(&fail, TOL) {
            GateOutcome::Rejected { residuals } => {
                // First constraint reads -b before normalization; with
                // b = 1/10 the normalized residual is -1.
                assert!((residuals[0] - cplx(-1.0, 0.0)).norm() < 1e-14);
            }
            GateOutcome::Admissible { .. } => panic!("must reject"),
        }
    }

    #[test]
    fn zero_lambda_reduces_to_the_plain_flow() {
        let ab = HomogeneousAB { a: cplx(0.5, 0.0), b: cplx(0.0, 0.0) };
        let co = homogeneous_coefficients(&ab);
        let x0 = InitialState { x1: cplx(0.3, 0.1), x2: cplx(0.2, -0.2) };
        let settings = IntegrationSettings::default();
        let t = 0.4;
        let extended = exp_scaling_extend(&co, cplx(0.0, 0.0), &x0, t, TOL, &settings).unwrap();
        let plain = oracle::integrate(&co, &x0, t, &settings).unwrap();
        assert!((extended.x1 - plain.x1).norm() < 1e-8);
        assert!((extended.x2 - plain.x2).norm() < 1e-8);
    }

    #[test]
    fn unit_lambda_at_ln2_doubles_the_unit_time_state() {
        // lambda = 1, t = ln 2: tau = 1 and x(t) = 2 * zeta(1).
        let ab = HomogeneousAB { a: cplx(0.5, 0.0), b: cplx(0.0, 0.0) };
        let co = homogeneous_coefficients(&ab);
        let x0 = InitialState { x1: cplx(0.2, 0.0), x2: cplx(0.1, 0.0) };
        let settings = IntegrationSettings::default();
        let extended =
            exp_scaling_extend(&co, cplx(1.0, 0.0), &x0, 2f64.ln(), TOL, &settings).unwrap();
        let zeta = oracle::integrate(&co, &x0, 1.0, &settings).unwrap();
        assert!((extended.x1 - 2.0 * zeta.x1).norm() < 1e-8);
        assert!((extended.x2 - 2.0 * zeta.x2).norm() < 1e-8);
    }

    #[test]
    fn extension_satisfies_the_extended_ode() {
        let ab = HomogeneousAB { a: cplx(0.5, 0.0), b: cplx(0.0, 0.0) };
        let co = homogeneous_coefficients(&ab);
        let lambda = cplx(0.5, 0.0);
        let x0 = InitialState { x1: cplx(0.25, 0.05), x2: cplx(-0.15, 0.1) };
        let settings = IntegrationSettings::default();
        let t = 0.3;
        let h = 1e-5;
        let at = |tt: f64| exp_scaling_extend(&co, lambda, &x0, tt, TOL, &settings).unwrap();
        let (pm, p0, pp) = (at(t - h), at(t), at(t + h));
        let d1 = (pp.x1 - pm.x1) / (2.0 * h);
        let d2 = (pp.x2 - pm.x2) / (2.0 * h);
        let (q1, q2) = co.rhs(p0.x1, p0.x2);
        let r1 = d1 - (lambda * p0.x1 + q1);
        let r2 = d2 - (lambda * p0.x2 + q2);
        assert!(r1.norm() < 1e-6, "residual {r1}");
        assert!(r2.norm() < 1e-6, "residual {r2}");
    }

    #[test]
    fn forcing_terms_are_refused() {
        let mut co =
            homogeneous_coefficients(&HomogeneousAB { a: cplx(0.0, 0.0), b: cplx(0.0, 0.0) });
        co.c[0][5] = cplx(1.0, 0.0);
        let x0 = InitialState { x1: cplx(0.1, 0.0), x2: cplx(0.1, 0.0) };
        let out =
            exp_scaling_extend(&co, cplx(1.0, 0.0), &x0, 0.5, TOL, &IntegrationSettings::default());
        assert!(matches!(out, Err(Error::NonGeneric { .. })));
    }
}
