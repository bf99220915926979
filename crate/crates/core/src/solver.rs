//! Evaluation of the explicit solution, trajectory sampling, and
//! long-time classification (equilibria, isochrony).

use num_rational::Rational64;

use crate::algebra::{ComplexScalar, Tolerance};
use crate::error::{Error, Result};
use crate::forward_map::Coefficients;
use crate::inverse_map::{self, ReducedForm};
use crate::riccati::{self, Asymptote};

/// State of the system at time zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub x1: ComplexScalar,
    pub x2: ComplexScalar,
}

/// One evaluated trajectory point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub x1: ComplexScalar,
    pub x2: ComplexScalar,
}

/// Consecutive grid times at which the closed form had a pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleWindow {
    pub t_first: f64,
    pub t_last: f64,
    pub points: usize,
}

/// Long-time regime of a reduced system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Every trajectory is periodic with one period independent of the
    /// initial data: both exponents are commensurate purely imaginary
    /// numbers.
    Isochronous,
    /// Exactly one exponent is purely imaginary; trajectories approach a
    /// periodic regime.
    AsymptoticallyIsochronous,
    /// Both exponents have nonzero real part; trajectories converge to a
    /// fixed point.
    ConvergesToEquilibrium,
    Generic,
}

/// Classification outcome. `period`, `rho`, `omega`, and `limit_state`
/// are filled only where the regime defines them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationReport {
    pub regime: Regime,
    pub period: Option<f64>,
    pub rho: Option<[Rational64; 2]>,
    pub omega: Option<f64>,
    pub limit_state: Option<(ComplexScalar, ComplexScalar)>,
}

/// Default bound on denominators considered when deciding whether the two
/// oscillation frequencies are commensurate.
pub const DEFAULT_MAX_DENOMINATOR: u32 = 64;

/// Relative tolerance of the rational approximation used by the
/// commensurability test. Exact rationality is undecidable on floats.
pub const COMMENSURABILITY_TOL: f64 = 1e-9;

/// Initial values of the two auxiliary flows, from the observable state:
/// inverts the mixing `x1 = z1 w1 + z2 w2`, `x2 = w1 + w2` at time zero.
pub fn initial_w(
    rf: &ReducedForm,
    x0: &InitialState,
    tol: Tolerance,
) -> Result<(ComplexScalar, ComplexScalar)> {
    let dz = rf.z[0] - rf.z[1];
    if dz.norm() <= tol.threshold(rf.z[0].norm().max(rf.z[1].norm())) {
        return Err(Error::DegenerateZ);
    }
    let w1 = (x0.x1 - rf.z[1] * x0.x2) / dz;
    let w2 = -(x0.x1 - rf.z[0] * x0.x2) / dz;
    Ok((w1, w2))
}

/// Evaluate the closed-form solution at one time. At `t = 0` the initial
/// state is returned exactly.
pub fn solve_at(
    rf: &ReducedForm,
    x0: &InitialState,
    t: f64,
    tol: Tolerance,
) -> Result<TrajectoryPoint> {
    let (w1_0, w2_0) = initial_w(rf, x0, tol)?;
    solve_from_w(rf, x0, w1_0, w2_0, t, tol)
}

fn solve_from_w(
    rf: &ReducedForm,
    x0: &InitialState,
    w1_0: ComplexScalar,
    w2_0: ComplexScalar,
    t: f64,
    tol: Tolerance,
) -> Result<TrajectoryPoint> {
    if t == 0.0 {
        return Ok(TrajectoryPoint { t, x1: x0.x1, x2: x0.x2 });
    }
    let w1 = riccati::flow_at(&rf.flows[0], &rf.alpha[0], w1_0, t, tol)?;
    let w2 = riccati::flow_at(&rf.flows[1], &rf.alpha[1], w2_0, t, tol)?;
    Ok(TrajectoryPoint { t, x1: rf.z[0] * w1 + rf.z[1] * w2, x2: w1 + w2 })
}

/// Evaluate the solution on an ascending time grid. Grid points at which
/// the closed form has a pole are omitted from the output and reported as
/// windows in the sidecar list; nothing is interpolated across a pole.
pub fn sample(
    rf: &ReducedForm,
    x0: &InitialState,
    t_grid: &[f64],
    tol: Tolerance,
) -> Result<(Vec<TrajectoryPoint>, Vec<PoleWindow>)> {
    let (w1_0, w2_0) = initial_w(rf, x0, tol)?;
    let mut points = Vec::with_capacity(t_grid.len());
    let mut windows: Vec<PoleWindow> = Vec::new();
    let mut open: Option<PoleWindow> = None;
    for &t in t_grid {
        match solve_from_w(rf, x0, w1_0, w2_0, t, tol) {
            Ok(p) => {
                if let Some(w) = open.take() {
                    windows.push(w);
                }
                points.push(p);
            }
            Err(Error::PoleAtTime { .. }) => match open.as_mut() {
                Some(w) => {
                    w.t_last = t;
                    w.points += 1;
                }
                None => open = Some(PoleWindow { t_first: t, t_last: t, points: 1 }),
            },
            Err(other) => return Err(other),
        }
    }
    if let Some(w) = open {
        windows.push(w);
    }
    Ok((points, windows))
}

/// Best rational approximation p/q to `x` with `q <= max_den`, accepted
/// when it matches to the given relative tolerance. Continued-fraction
/// convergents; `q` is always positive, the sign rides on `p`.
fn best_rational(x: f64, max_den: u32, rel_tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let accept = |p: i64, q: i64| (x - p as f64 / q as f64).abs() <= rel_tol * x.abs().max(1e-300);
    let mut a = x.floor();
    let (mut p_prev, mut q_prev) = (1i64, 0i64);
    let (mut p, mut q) = (a as i64, 1i64);
    let mut frac = x - a;
    for _ in 0..64 {
        if q > max_den as i64 {
            return None;
        }
        if accept(p, q) {
            return Some((p, q));
        }
        if frac.abs() < 1e-18 {
            return None;
        }
        let inv = 1.0 / frac;
        a = inv.floor();
        frac = inv - a;
        if a.abs() > i64::MAX as f64 / 2.0 {
            return None;
        }
        let ai = a as i64;
        let p_next = ai.checked_mul(p).and_then(|v| v.checked_add(p_prev))?;
        let q_next = ai.checked_mul(q).and_then(|v| v.checked_add(q_prev))?;
        (p_prev, q_prev) = (p, q);
        (p, q) = (p_next, q_next);
    }
    None
}

/// Classify the long-time behavior from the two exponents.
///
/// Both exponents purely imaginary with a rational frequency ratio (up to
/// `max_denominator`) gives isochrony; the reported period is the minimal
/// common period of the two flows, and `rho` holds the coprime integer
/// pair with `beta_n = i * rho_n * omega`. Exactly one purely imaginary
/// exponent gives asymptotic isochrony. Two exponents with nonzero real
/// part give convergence to the equilibrium mapped from the attracting
/// fixed points. Everything else is reported as generic.
pub fn classify(rf: &ReducedForm, tol: Tolerance, max_denominator: u32) -> ClassificationReport {
    let b = [rf.flows[0].beta, rf.flows[1].beta];
    let thr = |v: ComplexScalar| tol.threshold(v.norm());
    let purely_imaginary = |v: ComplexScalar| v.re.abs() <= thr(v) && v.im.abs() > thr(v);
    let has_real_part = |v: ComplexScalar| v.re.abs() > thr(v);

    let generic = ClassificationReport {
        regime: Regime::Generic,
        period: None,
        rho: None,
        omega: None,
        limit_state: None,
    };

    if purely_imaginary(b[0]) && purely_imaginary(b[1]) {
        if let Some((p, q)) =
            best_rational(b[0].im / b[1].im, max_denominator, COMMENSURABILITY_TOL)
        {
            if p != 0 {
                let omega = b[1].im / q as f64;
                return ClassificationReport {
                    regime: Regime::Isochronous,
                    period: Some(std::f64::consts::TAU / omega.abs()),
                    rho: Some([Rational64::from_integer(p), Rational64::from_integer(q)]),
                    omega: Some(omega),
                    limit_state: None,
                };
            }
        }
        return generic;
    }

    let imag0 = purely_imaginary(b[0]);
    let imag1 = purely_imaginary(b[1]);
    if (imag0 && has_real_part(b[1])) || (imag1 && has_real_part(b[0])) {
        let osc = if imag0 { b[0] } else { b[1] };
        return ClassificationReport {
            regime: Regime::AsymptoticallyIsochronous,
            period: Some(std::f64::consts::TAU / osc.im.abs()),
            rho: None,
            omega: Some(osc.im),
            limit_state: None,
        };
    }

    if has_real_part(b[0]) && has_real_part(b[1]) {
        let limit_w = |n: usize| match riccati::asymptote(&rf.flows[n], tol) {
            Asymptote::ConvergesTo(w) => Some(w),
            _ => None,
        };
        if let (Some(w1), Some(w2)) = (limit_w(0), limit_w(1)) {
            return ClassificationReport {
                regime: Regime::ConvergesToEquilibrium,
                period: None,
                rho: None,
                omega: None,
                limit_state: Some((rf.z[0] * w1 + rf.z[1] * w2, w1 + w2)),
            };
        }
    }

    generic
}

/// Evaluate the solution through the structural route: rebuild mixing and
/// rates for the given free scalings, flow the auxiliary variables, and
/// mix them back. The observable output does not depend on the scalings;
/// this is the independent second path used to verify [`solve_at`].
pub fn solve_via_structural(
    co: &Coefficients,
    x0: &InitialState,
    t: f64,
    lambda: (ComplexScalar, ComplexScalar),
    tol: Tolerance,
) -> Result<TrajectoryPoint> {
    let rf = inverse_map::reduce(co, tol)?;
    let sp = inverse_map::structural_from_reduced(&rf, lambda.0, lambda.1)?;
    if t == 0.0 {
        return Ok(TrajectoryPoint { t, x1: x0.x1, x2: x0.x2 });
    }
    let m11 = sp.mixing[0][0];
    let m12 = sp.mixing[0][1];
    let m21 = sp.mixing[1][0];
    let m22 = sp.mixing[1][1];
    let det = sp.det();
    let y1_0 = (m22 * x0.x1 - m12 * x0.x2) / det;
    let y2_0 = (m11 * x0.x2 - m21 * x0.x1) / det;
    let sol1 = riccati::reduce(&sp.rates[0], tol);
    let sol2 = riccati::reduce(&sp.rates[1], tol);
    let y1 = riccati::flow_at(&sol1, &sp.rates[0], y1_0, t, tol)?;
    let y2 = riccati::flow_at(&sol2, &sp.rates[1], y2_0, t, tol)?;
    Ok(TrajectoryPoint { t, x1: m11 * y1 + m12 * y2, x2: m21 * y1 + m22 * y2 })
}
