//! Input documents: a single JSON object with complex numbers written as
//! 2-element `[re, im]` arrays of decimal floats.
//!
//! Fields: `c` (2x6 coefficient rows), optional `A` (2x2 mixing matrix),
//! optional `a` (2x3 rate rows, ordered quadratic/linear/constant),
//! optional `x0` (2 pairs), optional free-form `metadata`. At least one
//! of `c` and the structural pair `A`/`a` must be present; when both are
//! given they must describe the same system.

use quadode_core::algebra::{cplx, ComplexScalar, Tolerance};
use quadode_core::forward_map::{forward, Coefficients, StructuralParams};
use quadode_core::riccati::RiccatiParams;
use quadode_core::solver::InitialState;
use serde_json::Value;

#[derive(Debug, Clone)]
pub struct SystemDocument {
    pub coefficients: Option<Coefficients>,
    pub structural: Option<StructuralParams>,
    pub x0: Option<InitialState>,
}

impl SystemDocument {
    /// The coefficients of the system: the explicit ones, or the ones
    /// implied by the structural parameters.
    pub fn coefficients(&self, tol: Tolerance) -> Result<Coefficients, String> {
        if let Some(c) = self.coefficients {
            return Ok(c);
        }
        let sp = self.structural.as_ref().expect("validated: one of the two is present");
        forward(sp, tol).map_err(|e| format!("structural parameters do not define a system: {e}"))
    }
}

fn parse_pair(v: &Value, path: &str) -> Result<ComplexScalar, String> {
    let arr = v.as_array().ok_or_else(|| format!("{path}: expected [re, im]"))?;
    if arr.len() != 2 {
        return Err(format!("{path}: expected exactly 2 entries, got {}", arr.len()));
    }
    let num = |i: usize| -> Result<f64, String> {
        let x = arr[i].as_f64().ok_or_else(|| format!("{path}[{i}]: expected a number"))?;
        if !x.is_finite() {
            return Err(format!("{path}[{i}]: must be finite"));
        }
        Ok(x)
    };
    Ok(cplx(num(0)?, num(1)?))
}

fn parse_rows<const N: usize>(v: &Value, path: &str) -> Result<[[ComplexScalar; N]; 2], String> {
    let rows = v.as_array().ok_or_else(|| format!("{path}: expected an array of 2 rows"))?;
    if rows.len() != 2 {
        return Err(format!("{path}: expected 2 rows, got {}", rows.len()));
    }
    let mut out = [[cplx(0.0, 0.0); N]; 2];
    for (n, row) in rows.iter().enumerate() {
        let entries =
            row.as_array().ok_or_else(|| format!("{path}[{n}]: expected an array of {N} pairs"))?;
        if entries.len() != N {
            return Err(format!("{path}[{n}]: expected {N} pairs, got {}", entries.len()));
        }
        for (j, e) in entries.iter().enumerate() {
            out[n][j] = parse_pair(e, &format!("{path}[{n}][{j}]"))?;
        }
    }
    Ok(out)
}

/// Parse and validate one document.
pub fn parse_document(text: &str, tol: Tolerance) -> Result<SystemDocument, String> {
    let root: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = root.as_object().ok_or("top level must be a JSON object")?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "c" | "A" | "a" | "x0" | "metadata") {
            return Err(format!("unknown field `{key}`"));
        }
    }

    let coefficients = match obj.get("c") {
        Some(v) => Some(Coefficients { c: parse_rows::<6>(v, "c")? }),
        None => None,
    };

    let structural = match (obj.get("A"), obj.get("a")) {
        (Some(mv), Some(rv)) => {
            let mixing = parse_rows::<2>(mv, "A")?;
            let rates = parse_rows::<3>(rv, "a")?;
            Some(StructuralParams {
                mixing,
                rates: [
                    RiccatiParams::new(rates[0][0], rates[0][1], rates[0][2]),
                    RiccatiParams::new(rates[1][0], rates[1][1], rates[1][2]),
                ],
            })
        }
        (None, None) => None,
        _ => return Err("structural parameters need both `A` and `a`".into()),
    };

    let x0 = match obj.get("x0") {
        Some(v) => {
            let pairs = parse_rows_flat(v)?;
            Some(InitialState { x1: pairs[0], x2: pairs[1] })
        }
        None => None,
    };

    if coefficients.is_none() && structural.is_none() {
        return Err("document must contain `c` or the structural pair `A`/`a`".into());
    }

    // When both descriptions are present they must agree.
    if let (Some(c), Some(sp)) = (&coefficients, &structural) {
        let built = forward(sp, tol)
            .map_err(|e| format!("structural parameters do not define a system: {e}"))?;
        let scale = c.magnitude().max(built.magnitude()).max(1.0);
        for n in 0..2 {
            for j in 0..6 {
                let d = (c.c[n][j] - built.c[n][j]).norm();
                if d > tol.threshold(scale) {
                    return Err(format!(
                        "`c` and `A`/`a` disagree at row {n}, column {j} (|diff| = {d:.3e})"
                    ));
                }
            }
        }
    }

    Ok(SystemDocument { coefficients, structural, x0 })
}

fn parse_rows_flat(v: &Value) -> Result<[ComplexScalar; 2], String> {
    let arr = v.as_array().ok_or("x0: expected an array of 2 pairs")?;
    if arr.len() != 2 {
        return Err(format!("x0: expected 2 pairs, got {}", arr.len()));
    }
    Ok([parse_pair(&arr[0], "x0[0]")?, parse_pair(&arr[1], "x0[1]")?])
}
