//! Complex scalar semantics shared by every other module: principal
//! square root, tolerance-based comparison, and the tolerance policy.

use num_complex::Complex64;

/// Complex scalar used for all state variables and parameters.
pub type ComplexScalar = Complex64;

/// Shorthand constructor for complex scalars.
pub fn cplx(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

/// Absolute/relative tolerance pair used by all comparisons.
///
/// A quantity of magnitude `scale` counts as zero when it is below
/// `abs_tol + rel_tol * scale`. At least one component must be strictly
/// positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        assert!(
            abs_tol >= 0.0 && rel_tol >= 0.0 && (abs_tol > 0.0 || rel_tol > 0.0),
            "tolerance components must be nonnegative and not both zero"
        );
        Self { abs_tol, rel_tol }
    }

    /// Comparison threshold for quantities of the given magnitude.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale
    }

    /// Threshold for residuals that have already been normalized to
    /// unit scale.
    pub fn unit(&self) -> f64 {
        self.threshold(1.0)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-9 }
    }
}

/// Principal complex square root: `w * w == z` with `re(w) >= 0`, ties on
/// the imaginary axis broken toward `im(w) >= 0`.
///
/// Wherever both roots matter the caller carries the `+-` explicitly, so
/// a fixed branch is safe; downstream flows are invariant under swapping
/// the branch together with the associated root pair.
pub fn csqrt_principal(z: ComplexScalar) -> ComplexScalar {
    let w = z.sqrt();
    if w.re < 0.0 || (w.re == 0.0 && w.im < 0.0) {
        -w
    } else {
        w
    }
}

/// True iff `|a - b| <= abs_tol + rel_tol * max(|a|, |b|)`.
pub fn approx_eq(a: ComplexScalar, b: ComplexScalar, tol: Tolerance) -> bool {
    (a - b).norm() <= tol.threshold(a.norm().max(b.norm()))
}
