//! Surface families built from a spine curve plus marching-scale frame
//! coefficients, with partials, normals, fundamental forms, curvatures
//! and the asymptotic residual along the spine.

use std::sync::Arc;

use thiserror::Error;

use crate::curve::{frenet_at, CurveError, FrenetApparatus, ParamCurve, DEFAULT_FRENET_TOL};
use crate::marching::MarchingTriple;
use crate::mlinalg::{
    causal_classify_tol, cross, frame_det, inner, lorentz_norm, CausalClass, MVec3,
    DEFAULT_NULL_BAND,
};

pub type SurfFn = Arc<dyn Fn(f64, f64) -> MVec3 + Send + Sync>;

/// Step for second partials (fourth-order stencils on the analytic
/// first partials), scaled by `max(1, |coordinate|)`.
pub const SECOND_PARTIAL_STEP: f64 = 1e-3;
/// Step for the asymptotic-residual difference on the normal field.
pub const ASYMPTOTIC_FD_STEP: f64 = 1e-4;
/// Euclidean threshold below which a normal counts as degenerate.
pub const DEGENERATE_NORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("degenerate normal at (u,v) = ({u}, {v}): |n|_euclid = {magnitude:.3e}")]
    DegenerateNormal { u: f64, v: f64, magnitude: f64 },
    #[error("null normal at (u,v) = ({u}, {v}): the surface changes causal type there")]
    NullNormal { u: f64, v: f64 },
    #[error("triple is not isoparametric at v0 (max |x|,|y|,|z| = {residual:.3e} at u = {u})")]
    NotIsoparametric { u: f64, residual: f64 },
    #[error("degenerate first fundamental form at (u,v) = ({u}, {v}): EG - F^2 = {det:.3e}")]
    DegenerateFirstForm { u: f64, v: f64, det: f64 },
}

/// A family member: spine curve, marching triple, parameter rectangle.
#[derive(Clone)]
pub struct SurfaceFamily {
    pub curve: ParamCurve,
    pub triple: MarchingTriple,
    pub u_domain: (f64, f64),
    pub v_domain: (f64, f64),
    pub claimed_surface_class: Option<CausalClass>,
    pub claimed_curve_class: Option<CausalClass>,
}

impl SurfaceFamily {
    pub fn new(curve: ParamCurve, triple: MarchingTriple, u_domain: (f64, f64)) -> Self {
        let v_domain = triple.v_domain;
        Self {
            curve,
            triple,
            u_domain,
            v_domain,
            claimed_surface_class: None,
            claimed_curve_class: None,
        }
    }

    pub fn v0(&self) -> f64 {
        self.triple.v0
    }

    pub fn frenet(&self, u: f64) -> Result<FrenetApparatus, SurfaceError> {
        Ok(frenet_at(&self.curve, u, DEFAULT_FRENET_TOL)?)
    }
}

/// Frame coefficients of the normal along v = v0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalCoefficients {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
}

/// First and second fundamental form coefficients, the second form taken
/// with respect to the unit normal.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalForms {
    pub e_1: f64,
    pub f_1: f64,
    pub g_1: f64,
    pub e_2: f64,
    pub f_2: f64,
    pub g_2: f64,
}

impl FundamentalForms {
    /// EG - F^2 of the first form.
    pub fn first_det(&self) -> f64 {
        self.e_1 * self.g_1 - self.f_1 * self.f_1
    }
    /// Numerator of the mean curvature, eG - 2fF + gE.
    pub fn mean_numerator(&self) -> f64 {
        self.e_2 * self.g_1 - 2.0 * self.f_2 * self.f_1 + self.g_2 * self.e_1
    }
}

/// Minimal surface-patch interface shared by constructed families and
/// closed-form comparison surfaces.
pub trait SurfacePatch {
    fn eval(&self, u: f64, v: f64) -> Result<MVec3, SurfaceError>;
    fn partials(&self, u: f64, v: f64) -> Result<(MVec3, MVec3), SurfaceError>;
}

/// A surface given directly by a closed-form map, differentiated with
/// fourth-order central stencils.
#[derive(Clone)]
pub struct AnalyticSurface {
    pub f: SurfFn,
    pub fd_step: f64,
}

impl AnalyticSurface {
    pub fn new(f: SurfFn) -> Self {
        Self { f, fd_step: SECOND_PARTIAL_STEP }
    }
}

fn stencil4(f: impl Fn(f64) -> MVec3, t: f64, h: f64) -> MVec3 {
    (f(t - 2.0 * h) - f(t + 2.0 * h) + (f(t + h) - f(t - h)) * 8.0) * (1.0 / (12.0 * h))
}

fn try_stencil4(
    f: impl Fn(f64) -> Result<MVec3, SurfaceError>,
    t: f64,
    h: f64,
) -> Result<MVec3, SurfaceError> {
    Ok((f(t - 2.0 * h)? - f(t + 2.0 * h)? + (f(t + h)? - f(t - h)?) * 8.0) * (1.0 / (12.0 * h)))
}

impl SurfacePatch for AnalyticSurface {
    fn eval(&self, u: f64, v: f64) -> Result<MVec3, SurfaceError> {
        Ok((self.f)(u, v))
    }
    fn partials(&self, u: f64, v: f64) -> Result<(MVec3, MVec3), SurfaceError> {
        let hu = self.fd_step * 1.0f64.max(u.abs());
        let hv = self.fd_step * 1.0f64.max(v.abs());
        let fu = stencil4(|t| (self.f)(t, v), u, hu);
        let fv = stencil4(|t| (self.f)(u, t), v, hv);
        Ok((fu, fv))
    }
}

impl SurfacePatch for SurfaceFamily {
    fn eval(&self, u: f64, v: f64) -> Result<MVec3, SurfaceError> {
        evaluate_surface(self, u, v)
    }
    fn partials(&self, u: f64, v: f64) -> Result<(MVec3, MVec3), SurfaceError> {
        surface_partials(self, u, v)
    }
}

/// Evaluate the family member: spine point plus the frame combination of
/// the marching values.
pub fn evaluate_surface(s: &SurfaceFamily, u: f64, v: f64) -> Result<MVec3, SurfaceError> {
    let alpha = s.curve.evaluate(u)?;
    let f = s.frenet(u)?;
    let t = &s.triple;
    Ok(alpha + f.e1 * t.x.eval(u, v) + f.e2 * t.y.eval(u, v) + f.e3 * t.z.eval(u, v))
}

/// First partials assembled analytically from the frame structure
/// equations and the marching partials.
pub fn surface_partials(s: &SurfaceFamily, u: f64, v: f64) -> Result<(MVec3, MVec3), SurfaceError> {
    let f = s.frenet(u)?;
    let t = &s.triple;
    let (x, y, z) = (t.x.eval(u, v), t.y.eval(u, v), t.z.eval(u, v));
    let (xu, yu, zu) = (t.x.du_at(u, v), t.y.du_at(u, v), t.z.du_at(u, v));
    let (xv, yv, zv) = (t.x.dv_at(u, v), t.y.dv_at(u, v), t.z.dv_at(u, v));
    let a = f.e2p_e1_coeff();
    let b = f.e2p_e3_coeff();
    let c = f.e3p_e2_coeff();
    let phi_u = f.e1 * (1.0 + xu + a * y) + f.e2 * (yu + f.kappa * x + c * z) + f.e3 * (zu + b * y);
    let phi_v = f.e1 * xv + f.e2 * yv + f.e3 * zv;
    Ok((phi_u, phi_v))
}

/// Cross-check: first partials by central differences of the evaluated
/// surface (fourth-order stencil at the given step).
pub fn surface_partials_fd(s: &SurfaceFamily, u: f64, v: f64, h: f64) -> Result<(MVec3, MVec3), SurfaceError> {
    let hu = h * 1.0f64.max(u.abs());
    let hv = h * 1.0f64.max(v.abs());
    let fu = try_stencil4(|t| evaluate_surface(s, t, v), u, hu)?;
    let fv = try_stencil4(|t| evaluate_surface(s, u, t), v, hv)?;
    Ok((fu, fv))
}

/// Unnormalized normal, `cross(phi_u, phi_v)`.
pub fn normal<P: SurfacePatch>(p: &P, u: f64, v: f64) -> Result<MVec3, SurfaceError> {
    let (fu, fv) = p.partials(u, v)?;
    let n = cross(fu, fv);
    if n.euclid_norm() <= DEGENERATE_NORMAL_TOL {
        return Err(SurfaceError::DegenerateNormal { u, v, magnitude: n.euclid_norm() });
    }
    Ok(n)
}

/// Frame coefficients of the normal along v = v0, computed from the
/// marching partials. Requires the triple to vanish at v0.
pub fn normal_coefficients_at_v0(s: &SurfaceFamily, u: f64, tol: f64) -> Result<NormalCoefficients, SurfaceError> {
    let t = &s.triple;
    let v0 = t.v0;
    let iso = t.x.eval(u, v0).abs().max(t.y.eval(u, v0).abs()).max(t.z.eval(u, v0).abs());
    if iso > tol {
        return Err(SurfaceError::NotIsoparametric { u, residual: iso });
    }
    let (xu, yu, zu) = (t.x.du_at(u, v0), t.y.du_at(u, v0), t.z.du_at(u, v0));
    let (xv, yv, zv) = (t.x.dv_at(u, v0), t.y.dv_at(u, v0), t.z.dv_at(u, v0));
    Ok(NormalCoefficients {
        phi1: yu * zv - zu * yv,
        phi2: (1.0 + xu) * zv - zu * xv,
        phi3: (1.0 + xu) * yv - yu * xv,
    })
}

/// Rebuild the normal at v0 from its frame coefficients. The expansion
/// carries the metric signs and the frame orientation, so it agrees with
/// `cross(phi_u, phi_v)` exactly.
pub fn normal_from_coefficients(s: &SurfaceFamily, u: f64, c: NormalCoefficients) -> Result<MVec3, SurfaceError> {
    let f = s.frenet(u)?;
    let det = frame_det(f.e1, f.e2, f.e3);
    let d = if det < 0.0 { -1.0 } else { 1.0 };
    Ok((f.e1 * (f.s1() * c.phi1) - f.e2 * (f.s2() * c.phi2) + f.e3 * (f.s3() * c.phi3)) * -d)
}

/// Asymptotic residual `<dn/du, e1>` at (u, v0), by central differences
/// on the unnormalized normal field, together with the reduced form
/// `d(phi1)/du + kappa * phi2`. Both vanish together.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticResidual {
    pub normal_form: f64,
    pub reduced_form: f64,
}

pub fn asymptotic_residual_full(s: &SurfaceFamily, u: f64) -> Result<AsymptoticResidual, SurfaceError> {
    let v0 = s.triple.v0;
    // isoparametric guard + phi coefficients at u
    let coeff = normal_coefficients_at_v0(s, u, 1e-7)?;
    let f = s.frenet(u)?;
    let h = ASYMPTOTIC_FD_STEP * 1.0f64.max(u.abs());
    let n_at = |t: f64| normal(s, t, v0);
    let np = n_at(u + h)?;
    let nm = n_at(u - h)?;
    let dn = (np - nm) * (0.5 / h);
    let normal_form = inner(dn, f.e1);
    let cp = normal_coefficients_at_v0(s, u + h, 1e-7)?;
    let cm = normal_coefficients_at_v0(s, u - h, 1e-7)?;
    let dphi1 = (cp.phi1 - cm.phi1) / (2.0 * h);
    let reduced_form = dphi1 + f.kappa * coeff.phi2;
    Ok(AsymptoticResidual { normal_form, reduced_form })
}

pub fn asymptotic_residual(s: &SurfaceFamily, u: f64) -> Result<f64, SurfaceError> {
    Ok(asymptotic_residual_full(s, u)?.normal_form)
}

/// First and second fundamental forms. Second partials come from
/// fourth-order central stencils on the analytic first partials.
pub fn fundamental_forms<P: SurfacePatch>(p: &P, u: f64, v: f64) -> Result<FundamentalForms, SurfaceError> {
    let (fu, fv) = p.partials(u, v)?;
    let n = cross(fu, fv);
    let mag = n.euclid_norm();
    if mag <= DEGENERATE_NORMAL_TOL {
        return Err(SurfaceError::DegenerateNormal { u, v, magnitude: mag });
    }
    let nn = inner(n, n);
    if nn.abs() <= DEFAULT_NULL_BAND * mag * mag {
        return Err(SurfaceError::NullNormal { u, v });
    }
    let n_hat = n * (1.0 / lorentz_norm(n));
    let hu = SECOND_PARTIAL_STEP * 1.0f64.max(u.abs());
    let hv = SECOND_PARTIAL_STEP * 1.0f64.max(v.abs());
    let fuu = try_stencil4(|t| p.partials(t, v).map(|q| q.0), u, hu)?;
    let fuv = try_stencil4(|t| p.partials(u, t).map(|q| q.0), v, hv)?;
    let fvv = try_stencil4(|t| p.partials(u, t).map(|q| q.1), v, hv)?;
    Ok(FundamentalForms {
        e_1: inner(fu, fu),
        f_1: inner(fu, fv),
        g_1: inner(fv, fv),
        e_2: inner(fuu, n_hat),
        f_2: inner(fuv, n_hat),
        g_2: inner(fvv, n_hat),
    })
}

/// Mean curvature H = (eG - 2fF + gE) / (2 (EG - F^2)).
pub fn mean_curvature<P: SurfacePatch>(p: &P, u: f64, v: f64) -> Result<f64, SurfaceError> {
    let ff = fundamental_forms(p, u, v)?;
    let det = ff.first_det();
    if det.abs() <= 1e-12 {
        return Err(SurfaceError::DegenerateFirstForm { u, v, det });
    }
    Ok(ff.mean_numerator() / (2.0 * det))
}

/// Gaussian curvature K = (eg - f^2) / (EG - F^2).
pub fn gaussian_curvature<P: SurfacePatch>(p: &P, u: f64, v: f64) -> Result<f64, SurfaceError> {
    let ff = fundamental_forms(p, u, v)?;
    let det = ff.first_det();
    if det.abs() <= 1e-12 {
        return Err(SurfaceError::DegenerateFirstForm { u, v, det });
    }
    Ok((ff.e_2 * ff.g_2 - ff.f_2 * ff.f_2) / det)
}

/// Causal class of the surface at a point: opposite to the causal class
/// of its normal, null where the normal is null.
pub fn surface_causal_at<P: SurfacePatch>(p: &P, u: f64, v: f64) -> Result<CausalClass, SurfaceError> {
    let n = normal(p, u, v)?;
    Ok(match causal_classify_tol(n, DEFAULT_NULL_BAND) {
        CausalClass::Spacelike => CausalClass::Timelike,
        CausalClass::Timelike => CausalClass::Spacelike,
        CausalClass::Null => CausalClass::Null,
    })
}
