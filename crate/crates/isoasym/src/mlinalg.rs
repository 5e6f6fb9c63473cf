//! Vector algebra for R^3_1, the real 3-space with the indefinite
//! inner product `x1*y1 + x2*y2 - x3*y3` (signature +,+,-).
//!
//! All operations are pure functions on immutable values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative half-width of the null band used by the
/// tolerance-aware classifier.
pub const DEFAULT_NULL_BAND: f64 = 1e-10;

/// A 3-vector in Minkowski 3-space. `x3` is the timelike axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Causal character of a vector under the Lorentzian inner product.
///
/// The zero vector is spacelike; null requires a nonzero vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Null,
}

impl std::fmt::Display for CausalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CausalClass::Spacelike => write!(f, "spacelike"),
            CausalClass::Timelike => write!(f, "timelike"),
            CausalClass::Null => write!(f, "null"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MlError {
    /// The vector is null or too close to null to normalize; the Frenet
    /// construction degenerates along such a direction.
    #[error("cannot normalize a null or near-null vector (|<X,X>|^(1/2) = {norm:.3e} <= {tol:.3e})")]
    NearNullVector { norm: f64, tol: f64 },
}

impl MVec3 {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        debug_assert!(
            x1.is_finite() && x2.is_finite() && x3.is_finite(),
            "non-finite coordinate"
        );
        Self { x1, x2, x3 }
    }

    pub fn zero() -> Self {
        Self { x1: 0.0, x2: 0.0, x3: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.x1 == 0.0 && self.x2 == 0.0 && self.x3 == 0.0
    }

    /// Ordinary Euclidean magnitude, used for degeneracy guards only.
    pub fn euclid_norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

impl std::ops::Add for MVec3 {
    type Output = MVec3;
    fn add(self, rhs: MVec3) -> MVec3 {
        MVec3 { x1: self.x1 + rhs.x1, x2: self.x2 + rhs.x2, x3: self.x3 + rhs.x3 }
    }
}

impl std::ops::Sub for MVec3 {
    type Output = MVec3;
    fn sub(self, rhs: MVec3) -> MVec3 {
        MVec3 { x1: self.x1 - rhs.x1, x2: self.x2 - rhs.x2, x3: self.x3 - rhs.x3 }
    }
}

impl std::ops::Mul<f64> for MVec3 {
    type Output = MVec3;
    fn mul(self, s: f64) -> MVec3 {
        MVec3 { x1: self.x1 * s, x2: self.x2 * s, x3: self.x3 * s }
    }
}

impl std::ops::Neg for MVec3 {
    type Output = MVec3;
    fn neg(self) -> MVec3 {
        MVec3 { x1: -self.x1, x2: -self.x2, x3: -self.x3 }
    }
}

/// Lorentzian inner product `x1*y1 + x2*y2 - x3*y3`.
pub fn inner(x: MVec3, y: MVec3) -> f64 {
    x.x1 * y.x1 + x.x2 * y.x2 - x.x3 * y.x3
}

/// Lorentzian vector product
/// `(x3*y2 - x2*y3, x1*y3 - x3*y1, x1*y2 - x2*y1)`.
///
/// The result is inner-product-orthogonal to both arguments.
pub fn cross(x: MVec3, y: MVec3) -> MVec3 {
    MVec3 {
        x1: x.x3 * y.x2 - x.x2 * y.x3,
        x2: x.x1 * y.x3 - x.x3 * y.x1,
        x3: x.x1 * y.x2 - x.x2 * y.x1,
    }
}

/// Exact sign classification: spacelike if `<X,X> > 0` or `X = 0`,
/// timelike if `< 0`, null otherwise.
pub fn causal_classify(x: MVec3) -> CausalClass {
    let q = inner(x, x);
    if q > 0.0 || x.is_zero() {
        CausalClass::Spacelike
    } else if q < 0.0 {
        CausalClass::Timelike
    } else {
        CausalClass::Null
    }
}

/// Classification with a relative null band: null when
/// `|<X,X>| <= tau_c * |X|^2_euclid` (for nonzero X).
pub fn causal_classify_tol(x: MVec3, tau_c: f64) -> CausalClass {
    if x.is_zero() {
        return CausalClass::Spacelike;
    }
    let q = inner(x, x);
    let e2 = x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3;
    if q.abs() <= tau_c * e2 {
        CausalClass::Null
    } else if q > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

/// `sqrt(|<X,X>|)`. Zero for null vectors.
pub fn lorentz_norm(x: MVec3) -> f64 {
    inner(x, x).abs().sqrt()
}

/// Divide by the Lorentzian norm. Errors on null or near-null input,
/// where the quotient is meaningless.
pub fn normalize(x: MVec3, tol: f64) -> Result<MVec3, MlError> {
    let n = lorentz_norm(x);
    if n <= tol {
        return Err(MlError::NearNullVector { norm: n, tol });
    }
    Ok(x * (1.0 / n))
}

/// Max deviation of the Gram matrix of (e1,e2,e3) from pseudo-orthonormal:
/// the six quantities `||<ei,ei>| - 1|` and `|<ei,ej>|`, i < j.
pub fn frame_orthonormality_residual(e1: MVec3, e2: MVec3, e3: MVec3) -> f64 {
    let d1 = (inner(e1, e1).abs() - 1.0).abs();
    let d2 = (inner(e2, e2).abs() - 1.0).abs();
    let d3 = (inner(e3, e3).abs() - 1.0).abs();
    let o12 = inner(e1, e2).abs();
    let o13 = inner(e1, e3).abs();
    let o23 = inner(e2, e3).abs();
    d1.max(d2).max(d3).max(o12).max(o13).max(o23)
}

/// Euclidean determinant of the frame rows. For a pseudo-orthonormal
/// frame in R^3_1 this is +1 or -1 and fixes the orientation factor in
/// frame expansions of the vector product.
pub fn frame_det(e1: MVec3, e2: MVec3, e3: MVec3) -> f64 {
    e1.x1 * (e2.x2 * e3.x3 - e2.x3 * e3.x2) - e1.x2 * (e2.x1 * e3.x3 - e2.x3 * e3.x1)
        + e1.x3 * (e2.x1 * e3.x2 - e2.x2 * e3.x1)
}
