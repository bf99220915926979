//! Closed-form solutions for planar quadratic ODE systems.
//!
//! The library decides whether a system of two coupled first-order ODEs
//! with second-degree polynomial right-hand sides (12 complex
//! coefficients) belongs to the explicitly solvable subclass, reduces it
//! to two decoupled scalar quadratic flows, evaluates exact trajectories,
//! classifies long-time behavior (equilibria, isochrony), and
//! cross-checks every closed form against an independent adaptive
//! Runge-Kutta integrator.
//!
//! Module map:
//!
//! - [`algebra`]: complex scalar plumbing (principal square root,
//!   tolerances).
//! - [`riccati`]: closed-form flow of one scalar quadratic ODE, with all
//!   degenerate branches.
//! - [`forward_map`]: 10 structural parameters -> 12 coefficients;
//!   everything built this way is solvable.
//! - [`inverse_map`]: admissibility constraints and the reduction of
//!   coefficients back to closed-form ingredients.
//! - [`solver`]: trajectory evaluation, sampling, and classification.
//! - [`special_cases`]: the restricted-coupling family and the
//!   homogeneous normal form with its exponential extension.
//! - [`oracle`]: the independent numerical integrator used for
//!   verification only.

pub mod algebra;
pub mod error;
pub mod forward_map;
pub mod inverse_map;
pub mod oracle;
pub mod riccati;
pub mod solver;
pub mod special_cases;

pub use algebra::{approx_eq, cplx, csqrt_principal, ComplexScalar, Tolerance};
pub use error::{Error, Result};
pub use forward_map::{forward, symmetry_transform, Coefficients, StructuralParams};
pub use inverse_map::{ConstraintReport, GenericityFlags, ReducedForm};
pub use oracle::{IntegrationSettings, BLOWUP_THRESHOLD};
pub use riccati::{Asymptote, RiccatiBranch, RiccatiParams, RiccatiSolution};
pub use solver::{
    ClassificationReport, InitialState, PoleWindow, Regime, TrajectoryPoint,
    DEFAULT_MAX_DENOMINATOR,
};
pub use special_cases::{Case51Match, Case51Params, Case51Reduced, GateOutcome, HomogeneousAB};
