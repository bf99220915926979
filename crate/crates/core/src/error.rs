//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while reducing, evaluating, or verifying
/// a planar quadratic system.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The 2x2 mixing matrix is singular, so the change of variables
    /// between the coupled and the decoupled system does not exist.
    #[error("singular mixing matrix (|det| = {det_mag:.3e})")]
    DeterminantZero { det_mag: f64 },

    /// The coefficients do not satisfy the four algebraic solvability
    /// constraints; no closed form exists on this input.
    #[error("coefficients violate the solvability constraints (max normalized residual {max_residual:.3e})")]
    ConstraintViolated { max_residual: f64 },

    /// A coefficient the generic reduction divides by is (numerically)
    /// zero. Some of these systems are handled by the special-case module.
    #[error("nongeneric coefficients: {reason}")]
    NonGeneric { reason: String },

    /// The two auxiliary roots coincide, which would force a singular
    /// mixing matrix.
    #[error("degenerate root pair: z1 and z2 coincide")]
    DegenerateZ,

    /// The two independent root formulas disagree beyond tolerance; the
    /// input is inconsistent even though the raw residuals slipped by.
    #[error("independent root formulas disagree (relative deviation {deviation:.3e})")]
    ZMismatch { deviation: f64 },

    /// A free scaling parameter was zero.
    #[error("scaling parameter lambda must be nonzero")]
    InvalidLambda,

    /// A closed-form denominator vanished: the solution blows up in
    /// finite time.
    #[error("solution has a pole at t = {t}")]
    PoleAtTime { t: f64 },

    /// The numerical integrator ran out of its step budget.
    #[error("integration exceeded {max_steps} steps at t = {t}")]
    StepLimitExceeded { t: f64, max_steps: usize },

    /// The numerical integrator detected a finite-time blow-up.
    #[error("state norm crossed the blow-up threshold at t = {t}")]
    BlowupDetected { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
