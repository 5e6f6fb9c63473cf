//! Parametric curves in R^3_1 and their Frenet apparatus.
//!
//! Unit-speed curves with non-vanishing, non-null curvature admit a
//! pseudo-orthonormal frame {e1, e2, e3}. The structure-equation sign
//! pattern depends on the causal character of the tangent; both the
//! spacelike-tangent set (with the sign epsilon on the binormal term)
//! and the timelike-tangent set are supported.

use std::sync::Arc;

use thiserror::Error;

use crate::mlinalg::{
    causal_classify, causal_classify_tol, cross, frame_orthonormality_residual, inner,
    lorentz_norm, normalize, CausalClass, MVec3, DEFAULT_NULL_BAND,
};

pub type CurveFn = Arc<dyn Fn(f64) -> MVec3 + Send + Sync>;

/// Default central-difference step, scaled by `max(1, |u|)` at the
/// evaluation point.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Default tolerance handed to [`frenet_at`] by higher-level code.
pub const DEFAULT_FRENET_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("parameter u = {u} outside curve domain [{l1}, {l2}]")]
    OutOfDomain { u: f64, l1: f64, l2: f64 },
    #[error("finite-difference stencil around u = {u} leaves the domain [{l1}, {l2}]")]
    StencilOutsideDomain { u: f64, l1: f64, l2: f64 },
    #[error("curvature vanishes at u = {u} (kappa = {kappa:.3e})")]
    VanishingCurvature { u: f64, kappa: f64 },
    #[error("second derivative is null or near-null at u = {u}; the frame is undefined there")]
    NullPrincipalNormal { u: f64 },
    #[error("curve is not unit speed at u = {u} (||<a',a'>| - 1| = {residual:.3e})")]
    NotUnitSpeed { u: f64, residual: f64 },
}

/// A curve given by a position function plus optional analytic
/// derivatives. Missing derivatives fall back to central differences of
/// the next lower order.
#[derive(Clone)]
pub struct ParamCurve {
    position: CurveFn,
    d1: Option<CurveFn>,
    d2: Option<CurveFn>,
    d3: Option<CurveFn>,
    pub fd_step: f64,
    pub domain: (f64, f64),
    /// Orientation flag applied to the computed binormal, used by
    /// presets whose published frame has the opposite handedness.
    pub e3_sign: f64,
}

impl ParamCurve {
    pub fn new(position: CurveFn, domain: (f64, f64)) -> Self {
        assert!(domain.0 < domain.1, "empty curve domain");
        Self { position, d1: None, d2: None, d3: None, fd_step: DEFAULT_FD_STEP, domain, e3_sign: 1.0 }
    }

    pub fn with_derivatives(mut self, d1: CurveFn, d2: CurveFn, d3: CurveFn) -> Self {
        self.d1 = Some(d1);
        self.d2 = Some(d2);
        self.d3 = Some(d3);
        self
    }

    pub fn with_d1(mut self, d1: CurveFn) -> Self {
        self.d1 = Some(d1);
        self
    }

    pub fn with_e3_sign(mut self, sign: f64) -> Self {
        assert!(sign == 1.0 || sign == -1.0);
        self.e3_sign = sign;
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        assert!(h > 0.0);
        self.fd_step = h;
        self
    }

    pub fn has_analytic_d1(&self) -> bool {
        self.d1.is_some()
    }

    fn check_domain(&self, u: f64) -> Result<(), CurveError> {
        let (l1, l2) = self.domain;
        if u < l1 || u > l2 || !u.is_finite() {
            Err(CurveError::OutOfDomain { u, l1, l2 })
        } else {
            Ok(())
        }
    }

    pub fn evaluate(&self, u: f64) -> Result<MVec3, CurveError> {
        self.check_domain(u)?;
        Ok((self.position)(u))
    }

    /// Evaluate without the domain check; finite-difference stencils use
    /// this for points that may sit marginally past an endpoint.
    fn position_raw(&self, u: f64) -> MVec3 {
        (self.position)(u)
    }

    fn step(&self, u: f64) -> f64 {
        self.fd_step * 1.0f64.max(u.abs())
    }

    /// Derivative of order 1..=3. Analytic when supplied, otherwise a
    /// central difference of the next lower order.
    pub fn derivative(&self, u: f64, order: u8) -> Result<MVec3, CurveError> {
        assert!((1..=3).contains(&order), "order must be 1, 2 or 3");
        self.check_domain(u)?;
        let analytic = match order {
            1 => &self.d1,
            2 => &self.d2,
            _ => &self.d3,
        };
        if let Some(f) = analytic {
            return Ok(f(u));
        }
        // stencil depth: how many nested differences sit below this order
        let depth = match order {
            1 => {
                if self.d1.is_some() { 0 } else { 1 }
            }
            2 => {
                if self.d1.is_some() { 1 } else { 2 }
            }
            _ => {
                if self.d2.is_some() {
                    1
                } else if self.d1.is_some() {
                    2
                } else {
                    3
                }
            }
        };
        let h = self.step(u);
        let (l1, l2) = self.domain;
        if u - depth as f64 * h < l1 || u + depth as f64 * h > l2 {
            return Err(CurveError::StencilOutsideDomain { u, l1, l2 });
        }
        self.derivative_raw(u, order)
    }

    fn derivative_raw(&self, u: f64, order: u8) -> Result<MVec3, CurveError> {
        let lower: Box<dyn Fn(f64) -> Result<MVec3, CurveError> + '_> = match order {
            1 => {
                if let Some(f) = &self.d1 {
                    return Ok(f(u));
                }
                Box::new(|t| Ok(self.position_raw(t)))
            }
            2 => {
                if let Some(f) = &self.d2 {
                    return Ok(f(u));
                }
                Box::new(|t| self.derivative_raw(t, 1))
            }
            _ => {
                if let Some(f) = &self.d3 {
                    return Ok(f(u));
                }
                Box::new(|t| self.derivative_raw(t, 2))
            }
        };
        let h = self.step(u);
        let fp = lower(u + h)?;
        let fm = lower(u - h)?;
        Ok((fp - fm) * (0.5 / h))
    }

    /// Max over an equispaced grid of `||<a',a'>| - 1|`, and whether it
    /// stays within `tol`.
    pub fn is_unit_speed(&self, samples: usize, tol: f64) -> Result<(bool, f64), CurveError> {
        assert!(samples >= 2);
        let (l1, l2) = self.domain;
        // keep fd stencils inside the domain
        let margin = if self.d1.is_some() { 0.0 } else { self.step(l1.abs().max(l2.abs())) * 1.5 };
        let a = l1 + margin;
        let b = l2 - margin;
        let mut worst = 0.0f64;
        for i in 0..samples {
            let u = a + (b - a) * i as f64 / (samples - 1) as f64;
            let d = self.derivative(u, 1)?;
            let r = (inner(d, d).abs() - 1.0).abs();
            if r > worst {
                worst = r;
            }
        }
        Ok((worst <= tol, worst))
    }

    /// Max residual `|analytic - central difference|` of d1 against the
    /// position samples, over an equispaced interior grid.
    pub fn validate_d1(&self, samples: usize) -> Option<f64> {
        let d1 = self.d1.as_ref()?;
        let (l1, l2) = self.domain;
        let mut worst = 0.0f64;
        for i in 0..samples {
            let t = (i as f64 + 0.5) / samples as f64;
            let u = l1 + (l2 - l1) * t;
            let h = self.step(u);
            // fourth-order stencil: detection margin over truncation noise
            let fd = (self.position_raw(u - 2.0 * h) - self.position_raw(u + 2.0 * h)
                + (self.position_raw(u + h) - self.position_raw(u - h)) * 8.0)
                * (1.0 / (12.0 * h));
            let r = (d1(u) - fd).euclid_norm();
            worst = worst.max(r);
        }
        Some(worst)
    }
}

/// Frenet data at a single parameter value.
#[derive(Debug, Clone, Copy)]
pub struct FrenetApparatus {
    pub e1: MVec3,
    pub e2: MVec3,
    pub e3: MVec3,
    pub kappa: f64,
    pub tau: f64,
    /// Sign of `<e3,e3>`.
    pub epsilon: i8,
    pub curve_class: CausalClass,
    pub e2_class: CausalClass,
    pub e3_class: CausalClass,
}

impl FrenetApparatus {
    fn sign(class: CausalClass) -> f64 {
        match class {
            CausalClass::Timelike => -1.0,
            _ => 1.0,
        }
    }

    pub fn s1(&self) -> f64 {
        Self::sign(self.curve_class)
    }
    pub fn s2(&self) -> f64 {
        Self::sign(self.e2_class)
    }
    pub fn s3(&self) -> f64 {
        Self::sign(self.e3_class)
    }

    /// Coefficient of e1 in e2'.
    pub fn e2p_e1_coeff(&self) -> f64 {
        -self.kappa * self.s2() / self.s1()
    }

    /// Coefficient of e3 in e2'. Follows the per-class torsion sign
    /// convention: `tau` for spacelike tangents, `-tau` for timelike.
    pub fn e2p_e3_coeff(&self) -> f64 {
        if self.curve_class == CausalClass::Timelike {
            -self.tau
        } else {
            self.tau
        }
    }

    /// Coefficient of e2 in e3'.
    pub fn e3p_e2_coeff(&self) -> f64 {
        -self.e2p_e3_coeff() * self.s3() / self.s2()
    }
}

fn frame_parts(c: &ParamCurve, u: f64, tol: f64) -> Result<(MVec3, MVec3, MVec3, f64, CausalClass), CurveError> {
    let e1 = c.derivative(u, 1)?;
    let speed_res = (inner(e1, e1).abs() - 1.0).abs();
    if speed_res > tol.max(1e-8) {
        return Err(CurveError::NotUnitSpeed { u, residual: speed_res });
    }
    let curve_class = causal_classify_tol(e1, DEFAULT_NULL_BAND);
    let a2 = c.derivative(u, 2)?;
    let kappa = lorentz_norm(a2);
    if kappa <= tol {
        if causal_classify_tol(a2, 1e-6) == CausalClass::Null && a2.euclid_norm() > tol {
            return Err(CurveError::NullPrincipalNormal { u });
        }
        return Err(CurveError::VanishingCurvature { u, kappa });
    }
    let e2 = normalize(a2, tol).map_err(|_| CurveError::NullPrincipalNormal { u })?;
    let sign = if curve_class == CausalClass::Timelike { -1.0 } else { 1.0 } * c.e3_sign;
    let e3 = cross(e1, e2) * sign;
    Ok((e1, e2, e3, kappa, curve_class))
}

/// Compute the full Frenet apparatus at `u`.
///
/// The tangent must be unit within `tol` and the second derivative must
/// have Lorentzian norm above `tol`. The binormal orientation is
/// `cross(e1, e2)` for spacelike tangents and its negative for timelike
/// ones, times the curve's `e3_sign` flag. Torsion comes from the metric
/// projection of e2' onto e3 — exact when analytic second and third
/// derivatives are attached, finite-difference otherwise.
pub fn frenet_at(c: &ParamCurve, u: f64, tol: f64) -> Result<FrenetApparatus, CurveError> {
    let (e1, e2, e3, kappa, curve_class) = frame_parts(c, u, tol)?;
    let e2_class = causal_classify_tol(e2, DEFAULT_NULL_BAND);
    let e3_class = causal_classify_tol(e3, DEFAULT_NULL_BAND);
    let epsilon: i8 = if inner(e3, e3) < 0.0 { -1 } else { 1 };

    let e2p = if c.d2.is_some() && c.d3.is_some() {
        // exact: e2 = a2 / kappa, so e2' = a3/kappa - a2 * kappa'/kappa^2
        // with kappa' = s2 <a3, a2> / kappa
        let a2 = c.derivative(u, 2)?;
        let a3 = c.derivative(u, 3)?;
        let s2 = if inner(a2, a2) < 0.0 { -1.0 } else { 1.0 };
        a3 * (1.0 / kappa) - a2 * (s2 * inner(a3, a2) / (kappa * kappa * kappa))
    } else {
        fd_e2_prime(c, u, tol)?
    };
    let proj = inner(e2p, e3) / inner(e3, e3);
    let tau = if curve_class == CausalClass::Timelike { -inner(e2p, e3) } else { proj };

    Ok(FrenetApparatus { e1, e2, e3, kappa, tau, epsilon, curve_class, e2_class, e3_class })
}

/// e2' by central differences of the normalized-normal field;
/// fourth-order stencils, one-sided near the domain ends.
fn fd_e2_prime(c: &ParamCurve, u: f64, tol: f64) -> Result<MVec3, CurveError> {
    let h = c.fd_step * 1.0f64.max(u.abs());
    let e2_at = |t: f64| -> Result<MVec3, CurveError> {
        let a2 = c.derivative(t, 2)?;
        normalize(a2, tol).map_err(|_| CurveError::NullPrincipalNormal { u: t })
    };
    let e2 = e2_at(u)?;
    let (l1, l2) = c.domain;
    let e2p = if u - 2.0 * h < l1 {
        (e2 * (-25.0 / 12.0) + e2_at(u + h)? * 4.0 - e2_at(u + 2.0 * h)? * 3.0
            + e2_at(u + 3.0 * h)? * (4.0 / 3.0)
            - e2_at(u + 4.0 * h)? * 0.25)
            * (1.0 / h)
    } else if u + 2.0 * h > l2 {
        (e2 * (25.0 / 12.0) - e2_at(u - h)? * 4.0 + e2_at(u - 2.0 * h)? * 3.0
            - e2_at(u - 3.0 * h)? * (4.0 / 3.0)
            + e2_at(u - 4.0 * h)? * 0.25)
            * (1.0 / h)
    } else {
        (e2_at(u - 2.0 * h)? - e2_at(u + 2.0 * h)? + (e2_at(u + h)? - e2_at(u - h)?) * 8.0)
            * (1.0 / (12.0 * h))
    };
    Ok(e2p)
}

/// Max componentwise residual of the three structure equations at `u`,
/// with frame derivatives taken by central differences.
pub fn frame_ode_residual(c: &ParamCurve, u: f64) -> Result<f64, CurveError> {
    let f = frenet_at(c, u, DEFAULT_FRENET_TOL)?;
    let h = c.fd_step * 1.0f64.max(u.abs());
    // fourth-order stencil on the frame field
    let fm2 = frenet_at(c, u - 2.0 * h, DEFAULT_FRENET_TOL)?;
    let fm1 = frenet_at(c, u - h, DEFAULT_FRENET_TOL)?;
    let fp1 = frenet_at(c, u + h, DEFAULT_FRENET_TOL)?;
    let fp2 = frenet_at(c, u + 2.0 * h, DEFAULT_FRENET_TOL)?;
    let d = |m2: MVec3, m1: MVec3, p1: MVec3, p2: MVec3| {
        (m2 - p2 + (p1 - m1) * 8.0) * (1.0 / (12.0 * h))
    };
    let e1p = d(fm2.e1, fm1.e1, fp1.e1, fp2.e1);
    let e2p = d(fm2.e2, fm1.e2, fp1.e2, fp2.e2);
    let e3p = d(fm2.e3, fm1.e3, fp1.e3, fp2.e3);
    let r1 = e1p - f.e2 * f.kappa;
    let r2 = e2p - (f.e1 * f.e2p_e1_coeff() + f.e3 * f.e2p_e3_coeff());
    let r3 = e3p - f.e2 * f.e3p_e2_coeff();
    let max_abs = |v: MVec3| v.x1.abs().max(v.x2.abs()).max(v.x3.abs());
    Ok(max_abs(r1).max(max_abs(r2)).max(max_abs(r3)))
}

/// Structure-equation residual for an explicitly given frame, e.g. one
/// transcribed from a reference. Curvature is estimated as the
/// Lorentzian norm of e1' and torsion by projection, mirroring
/// [`frame_ode_residual`].
pub fn frame_ode_residual_explicit(
    e1: &CurveFn,
    e2: &CurveFn,
    e3: &CurveFn,
    curve_class: CausalClass,
    u: f64,
    h: f64,
) -> f64 {
    let d = |f: &CurveFn| {
        (f(u - 2.0 * h) - f(u + 2.0 * h) + (f(u + h) - f(u - h)) * 8.0) * (1.0 / (12.0 * h))
    };
    let (e1u, e2u, e3u) = (e1(u), e2(u), e3(u));
    let e1p = d(e1);
    let e2p = d(e2);
    let e3p = d(e3);
    let kappa = lorentz_norm(e1p);
    let q3 = inner(e3u, e3u);
    let tau_proj = if q3.abs() > 1e-12 { inner(e2p, e3u) / q3 } else { 0.0 };
    let (c_e1, c_e3, c_e2) = if curve_class == CausalClass::Timelike {
        let tau = -inner(e2p, e3u);
        (kappa, -tau, tau)
    } else {
        let s2 = if inner(e2u, e2u) < 0.0 { -1.0 } else { 1.0 };
        let s3 = if q3 < 0.0 { -1.0 } else { 1.0 };
        (-kappa * s2, tau_proj, -tau_proj * s3 / s2)
    };
    let r1 = e1p - e2u * kappa;
    let r2 = e2p - (e1u * c_e1 + e3u * c_e3);
    let r3 = e3p - e2u * c_e2;
    let max_abs = |v: MVec3| v.x1.abs().max(v.x2.abs()).max(v.x3.abs());
    max_abs(r1).max(max_abs(r2)).max(max_abs(r3))
}

/// Gram-matrix defect of a frame field at `u`.
pub fn frame_orthonormality_at(e1: &CurveFn, e2: &CurveFn, e3: &CurveFn, u: f64) -> f64 {
    frame_orthonormality_residual(e1(u), e2(u), e3(u))
}

/// Causal class of the tangent at `u`.
pub fn tangent_class(c: &ParamCurve, u: f64) -> Result<CausalClass, CurveError> {
    Ok(causal_classify(c.derivative(u, 1)?))
}
