//! Independent numerical integrator for the planar quadratic system,
//! used to verify every closed-form claim. It never feeds the analytic
//! path: the only shared code is the polynomial right-hand side.
//!
//! The stepper is an embedded Dormand-Prince 5(4) pair with
//! proportional-integral step-size control, run on the real/imaginary
//! split of the state so the error norms are unambiguous.

use crate::algebra::cplx;
use crate::error::{Error, Result};
use crate::forward_map::Coefficients;
use crate::solver::{InitialState, TrajectoryPoint};

/// Tolerances and budgets for one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for IntegrationSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_step: f64::INFINITY, max_steps: 1_000_000 }
    }
}

/// State magnitude above which the integration reports a blow-up; far
/// above any test state scale, and consistent with the pole errors of
/// the analytic path.
pub const BLOWUP_THRESHOLD: f64 = 1e8;

/// Work counters for one integration.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Difference between the 5th- and the embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type State = [f64; 4];

fn rhs(co: &Coefficients, y: &State) -> State {
    let (d1, d2) = co.rhs(cplx(y[0], y[1]), cplx(y[2], y[3]));
    [d1.re, d1.im, d2.re, d2.im]
}

fn state_magnitude(y: &State) -> f64 {
    cplx(y[0], y[1]).norm().max(cplx(y[2], y[3]).norm())
}

fn error_norm(err: &State, y: &State, y_new: &State, s: &IntegrationSettings) -> f64 {
    let mut sum = 0.0;
    for i in 0..4 {
        let sc = s.abs_tol + s.rel_tol * y[i].abs().max(y_new[i].abs());
        let q = err[i] / sc;
        sum += q * q;
    }
    (sum / 4.0).sqrt()
}

/// Initial step-size guess following the usual two-probe heuristic.
fn initial_step(
    co: &Coefficients,
    y0: &State,
    f0: &State,
    span: f64,
    s: &IntegrationSettings,
) -> f64 {
    let sc: Vec<f64> = y0.iter().map(|v| s.abs_tol + s.rel_tol * v.abs()).collect();
    let rms =
        |v: &State| (v.iter().zip(&sc).map(|(x, c)| (x / c) * (x / c)).sum::<f64>() / 4.0).sqrt();
    let d0 = rms(y0);
    let d1 = rms(f0);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span).min(s.max_step);
    let mut y1 = *y0;
    for i in 0..4 {
        y1[i] += h0 * f0[i];
    }
    let f1 = rhs(co, &y1);
    let mut diff = [0.0; 4];
    for i in 0..4 {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = rms(&diff) / h0;
    let der = d1.max(d2);
    let h1 = if der <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / der).powf(0.2) };
    (100.0 * h0).min(h1).min(span).min(s.max_step)
}

/// Advance the system from `x0` over `[0, t_end]` (either sign) and
/// return the endpoint. Local error per step is kept at
/// `abs_tol + rel_tol * |state|`.
pub fn integrate(
    co: &Coefficients,
    x0: &InitialState,
    t_end: f64,
    s: &IntegrationSettings,
) -> Result<TrajectoryPoint> {
    integrate_with_stats(co, x0, t_end, s).map(|(p, _)| p)
}

/// Same as [`integrate`], also reporting step counts (used by the
/// convergence-order checks).
pub fn integrate_with_stats(
    co: &Coefficients,
    x0: &InitialState,
    t_end: f64,
    s: &IntegrationSettings,
) -> Result<(TrajectoryPoint, IntegrationStats)> {
    assert!(t_end.is_finite(), "t_end must be finite");
    assert!(s.rel_tol > 0.0 && s.abs_tol > 0.0 && s.max_steps > 0);
    let mut stats = IntegrationStats::default();
    let mut y: State = [x0.x1.re, x0.x1.im, x0.x2.re, x0.x2.im];
    if t_end == 0.0 {
        return Ok((point_at(t_end, &y), stats));
    }
    if state_magnitude(&y) > BLOWUP_THRESHOLD {
        return Err(Error::BlowupDetected { t: 0.0 });
    }

    let dir = t_end.signum();
    let span = t_end.abs();
    let mut t = 0.0_f64;
    let mut f0 = rhs(co, &y);
    stats.rhs_evals += 1;
    let mut h = initial_step(co, &y, &f0, span, s) * dir;
    stats.rhs_evals += 1;

    // PI controller constants (order 5, mild integral stabilization).
    const SAFE: f64 = 0.9;
    const BETA: f64 = 0.04;
    const EXPO1: f64 = 0.2 - BETA * 0.75;
    const FAC_MIN: f64 = 0.2; // strongest shrink per step
    const FAC_MAX: f64 = 10.0; // strongest growth per step
    let mut facold = 1e-4_f64;

    let mut k = [[0.0_f64; 4]; 7];
    loop {
        if (t - t_end) * dir >= 0.0 {
            return Ok((point_at(t_end, &y), stats));
        }
        if stats.accepted + stats.rejected >= s.max_steps {
            return Err(Error::StepLimitExceeded { t, max_steps: s.max_steps });
        }
        if h.abs() < f64::EPSILON * 4.0 * t.abs().max(1.0) {
            // The controller collapsed the step; the solution is leaving
            // through a pole faster than the state-norm check can see.
            return Err(Error::BlowupDetected { t });
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }

        k[0] = f0;
        for stage in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..4 {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[stage + 1] = rhs(co, &ys);
            stats.rhs_evals += 1;
        }
        // Stage 7 input is the 5th-order solution itself (FSAL).
        let y_new = {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(6) {
                let a = A[5][j];
                if a != 0.0 {
                    for i in 0..4 {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            ys
        };

        let mut err_vec = [0.0_f64; 4];
        for (j, kj) in k.iter().enumerate() {
            if E[j] != 0.0 {
                for i in 0..4 {
                    err_vec[i] += h * E[j] * kj[i];
                }
            }
        }
        let mut err = error_norm(&err_vec, &y, &y_new, s);
        if !err.is_finite() {
            // Overflow inside the trial step: force a hard rejection.
            err = 1e10;
        }

        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            facold = err.max(1e-4);
            t += h;
            y = y_new;
            f0 = k[6];
            stats.accepted += 1;
            if state_magnitude(&y) > BLOWUP_THRESHOLD {
                return Err(Error::BlowupDetected { t });
            }
            h = (h / fac).clamp(-s.max_step, s.max_step);
        } else {
            stats.rejected += 1;
            h /= (fac11 / SAFE).min(1.0 / FAC_MIN);
        }
    }
}

fn point_at(t: f64, y: &State) -> TrajectoryPoint {
    TrajectoryPoint { t, x1: cplx(y[0], y[1]), x2: cplx(y[2], y[3]) }
}

/// Integrate along an ascending time grid, continuing from point to
/// point. After a blow-up or step-limit failure every later grid point
/// reports the same error.
pub fn integrate_grid(
    co: &Coefficients,
    x0: &InitialState,
    grid: &[f64],
    s: &IntegrationSettings,
) -> Vec<Result<TrajectoryPoint>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut t_prev = 0.0;
    let mut state = *x0;
    let mut failed: Option<Error> = None;
    for &t in grid {
        debug_assert!(t >= t_prev, "grid must be sorted ascending from 0");
        if let Some(err) = &failed {
            out.push(Err(err.clone()));
            continue;
        }
        match integrate(co, &state, t - t_prev, s) {
            Ok(p) => {
                state = InitialState { x1: p.x1, x2: p.x2 };
                t_prev = t;
                out.push(Ok(TrajectoryPoint { t, ..p }));
            }
            Err(e) => {
                let shifted = match e {
                    Error::BlowupDetected { t: dt } => Error::BlowupDetected { t: t_prev + dt },
                    Error::StepLimitExceeded { t: dt, max_steps } => {
                        Error::StepLimitExceeded { t: t_prev + dt, max_steps }
                    }
                    other => other,
                };
                out.push(Err(shifted.clone()));
                failed = Some(shifted);
            }
        }
    }
    out
}
