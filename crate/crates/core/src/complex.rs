//! Complex double-precision scalars with fixed branch conventions.
//!
//! All scalar constants of the equation models live in [`Cx`]. The square
//! root and logarithm here always take the principal branch:
//!
//! * `csqrt`: `Re ≥ 0`, and on the branch cut (negative real axis) the
//!   result is `+i·sqrt(|x|)`, so `Re = 0 ⇒ Im ≥ 0`.
//! * `clog`: `Im ∈ (−π, π]`, with negative reals mapping to `ln|x| + iπ`.
//!
//! Signed zeros in the imaginary part are normalized before branching so
//! that `-0.0` never selects the lower side of a cut.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Cx = Complex64;

/// Shorthand constructor.
#[inline]
pub fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

/// The imaginary unit.
#[inline]
pub fn ci() -> Cx {
    Cx::new(0.0, 1.0)
}

/// Errors from scalar operations with restricted domains.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("logarithm of zero is undefined")]
    LogOfZero,
    #[error("non-finite value encountered: {0}")]
    NonFinite(Cx),
}

/// Absolute/relative tolerance pair; both components strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Tolerance {
    /// Construct a tolerance; panics unless both components are positive.
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        assert!(
            abs_tol > 0.0 && rel_tol > 0.0,
            "tolerance components must be strictly positive"
        );
        Tolerance { abs_tol, rel_tol }
    }

    /// Allowed deviation at the given magnitude scale.
    #[inline]
    pub fn margin(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale
    }
}

impl Default for Tolerance {
    /// 1e-9 absolute and relative: double precision with headroom for
    /// conditioning of the constraint formulas.
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
        }
    }
}

/// `true` iff `|x − y| ≤ abs_tol + rel_tol·max(|x|, |y|)`.
pub fn approx_eq(x: Cx, y: Cx, tol: Tolerance) -> bool {
    (x - y).norm() <= tol.margin(x.norm().max(y.norm()))
}

/// Principal-branch square root: `Re ≥ 0`, and `Im ≥ 0` when `Re = 0`.
pub fn csqrt(x: Cx) -> Cx {
    if x.im == 0.0 {
        // Avoid the signed-zero ambiguity of atan2 on the branch cut.
        if x.re >= 0.0 {
            return cx(x.re.sqrt(), 0.0);
        }
        return cx(0.0, (-x.re).sqrt());
    }
    x.sqrt()
}

/// Principal-branch logarithm: `Im ∈ (−π, π]`. Zero input is an error.
pub fn clog(x: Cx) -> Result<Cx, ScalarError> {
    if x == Cx::new(0.0, 0.0) {
        return Err(ScalarError::LogOfZero);
    }
    if x.im == 0.0 {
        if x.re > 0.0 {
            return Ok(cx(x.re.ln(), 0.0));
        }
        return Ok(cx(x.re.abs().ln(), std::f64::consts::PI));
    }
    Ok(x.ln())
}

/// Complex exponential.
#[inline]
pub fn cexp(x: Cx) -> Cx {
    x.exp()
}

/// Reject non-finite components at input boundaries.
pub fn ensure_finite(x: Cx) -> Result<Cx, ScalarError> {
    if x.re.is_finite() && x.im.is_finite() {
        Ok(x)
    } else {
        Err(ScalarError::NonFinite(x))
    }
}

/// Map `-0.0` components to `+0.0` so structural comparisons are stable.
#[inline]
pub fn normalize_zero(x: Cx) -> Cx {
    cx(
        if x.re == 0.0 { 0.0 } else { x.re },
        if x.im == 0.0 { 0.0 } else { x.im },
    )
}

/// Total order on complex scalars by `(Re, Im)`, used for canonical
/// term ordering. Values are expected to be finite.
pub fn cx_total_cmp(x: Cx, y: Cx) -> std::cmp::Ordering {
    let a = normalize_zero(x);
    let b = normalize_zero(y);
    a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
}
