//! Marching-scale functions x(u,v), y(u,v), z(u,v) and the isoasymptotic
//! condition checks on them.
//!
//! A triple qualifies when all three components vanish along v = v0 and
//! dz/dv does too. The two structured families (a power series in
//! separated u- and v-factors, and the same series composed with outer
//! C1 wrappers) come with simpler sufficient conditions that are checked
//! branch by branch.

use std::sync::Arc;

use crate::curve::DEFAULT_FD_STEP;

pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Default tolerance for condition checks on analytic specs.
pub const DEFAULT_COND_TOL: f64 = 1e-9;
/// Default number of equispaced u samples for the sampled checks.
pub const DEFAULT_U_SAMPLES: usize = 64;

/// A C1 function of one variable carried together with its derivative.
#[derive(Clone)]
pub struct C1Fn {
    f: Fn1,
    df: Fn1,
}

impl std::fmt::Debug for C1Fn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("C1Fn")
    }
}

impl C1Fn {
    pub fn new(f: Fn1, df: Fn1) -> Self {
        Self { f, df }
    }
    pub fn constant(c: f64) -> Self {
        Self { f: Arc::new(move |_| c), df: Arc::new(|_| 0.0) }
    }
    pub fn identity() -> Self {
        Self { f: Arc::new(|t| t), df: Arc::new(|_| 1.0) }
    }
    pub fn sin() -> Self {
        Self { f: Arc::new(f64::sin), df: Arc::new(f64::cos) }
    }
    pub fn cos() -> Self {
        Self { f: Arc::new(f64::cos), df: Arc::new(|t| -t.sin()) }
    }
    pub fn sinh() -> Self {
        Self { f: Arc::new(f64::sinh), df: Arc::new(f64::cosh) }
    }
    pub fn cosh() -> Self {
        Self { f: Arc::new(f64::cosh), df: Arc::new(f64::sinh) }
    }
    /// Polynomial with coefficients in ascending degree order.
    pub fn poly(coeffs: &[f64]) -> Self {
        let c: Vec<f64> = coeffs.to_vec();
        let d: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, a)| i as f64 * a).collect();
        let horner = |c: Vec<f64>| -> Fn1 {
            Arc::new(move |t| c.iter().rev().fold(0.0, |acc, a| acc * t + a))
        };
        Self { f: horner(c), df: horner(d) }
    }
    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
    pub fn deriv(&self, t: f64) -> f64 {
        (self.df)(t)
    }
}

/// A scalar field on the (u,v) rectangle with optional analytic partials.
#[derive(Clone)]
pub struct ScalarField2 {
    value: Fn2,
    du: Option<Fn2>,
    dv: Option<Fn2>,
    pub fd_step: f64,
}

impl ScalarField2 {
    pub fn new(value: Fn2) -> Self {
        Self { value, du: None, dv: None, fd_step: DEFAULT_FD_STEP }
    }
    pub fn with_partials(mut self, du: Fn2, dv: Fn2) -> Self {
        self.du = Some(du);
        self.dv = Some(dv);
        self
    }
    pub fn zero() -> Self {
        Self::new(Arc::new(|_, _| 0.0)).with_partials(Arc::new(|_, _| 0.0), Arc::new(|_, _| 0.0))
    }
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        (self.value)(u, v)
    }
    pub fn du_at(&self, u: f64, v: f64) -> f64 {
        match &self.du {
            Some(f) => f(u, v),
            None => {
                let h = self.fd_step * 1.0f64.max(u.abs());
                ((self.value)(u + h, v) - (self.value)(u - h, v)) / (2.0 * h)
            }
        }
    }
    pub fn dv_at(&self, u: f64, v: f64) -> f64 {
        match &self.dv {
            Some(f) => f(u, v),
            None => {
                let h = self.fd_step * 1.0f64.max(v.abs());
                ((self.value)(u, v + h) - (self.value)(u, v - h)) / (2.0 * h)
            }
        }
    }
}

/// The three frame coefficients of a surface family member, plus the
/// distinguished parameter v0 inside the v-domain.
#[derive(Clone)]
pub struct MarchingTriple {
    pub x: ScalarField2,
    pub y: ScalarField2,
    pub z: ScalarField2,
    pub v0: f64,
    pub v_domain: (f64, f64),
}

impl MarchingTriple {
    pub fn new(x: ScalarField2, y: ScalarField2, z: ScalarField2, v0: f64, v_domain: (f64, f64)) -> Self {
        assert!(
            v0 >= v_domain.0 && v0 <= v_domain.1,
            "v0 = {v0} outside v domain [{}, {}]",
            v_domain.0,
            v_domain.1
        );
        Self { x, y, z, v0, v_domain }
    }
}

/// Structured family 1: each component is a power series in a separated
/// u-factor and v-factor, `sum_i a_i * F(u)^i * G(v)^i`. The x and y
/// rows use (l, X) and (m, Y); the z row uses (n, Z).
#[derive(Clone, Debug)]
pub struct Type1Spec {
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub a3: Vec<f64>,
    pub l: C1Fn,
    pub m: C1Fn,
    pub n: C1Fn,
    pub big_x: C1Fn,
    pub big_y: C1Fn,
    pub big_z: C1Fn,
    pub v0: f64,
    pub v_domain: (f64, f64),
}

/// Structured family 2: the family-1 series composed with outer C1
/// wrappers f, g, h.
#[derive(Clone, Debug)]
pub struct Type2Spec {
    pub base: Type1Spec,
    pub f: C1Fn,
    pub g: C1Fn,
    pub h: C1Fn,
}

fn series_row(coeffs: Vec<f64>, fu: C1Fn, gv: C1Fn) -> ScalarField2 {
    let (c1, c2, c3) = (coeffs.clone(), coeffs.clone(), coeffs);
    let (fu1, fu2, fu3) = (fu.clone(), fu.clone(), fu);
    let (gv1, gv2, gv3) = (gv.clone(), gv.clone(), gv);
    let value: Fn2 = Arc::new(move |u, v| {
        let (a, b) = (fu1.eval(u), gv1.eval(v));
        let mut p = 1.0;
        let mut s = 0.0;
        for c in &c1 {
            p *= a * b;
            s += c * p;
        }
        s
    });
    let du: Fn2 = Arc::new(move |u, v| {
        let (a, b) = (fu2.eval(u), gv2.eval(v));
        let da = fu2.deriv(u);
        let mut s = 0.0;
        for (i, c) in c2.iter().enumerate() {
            let k = (i + 1) as f64;
            s += c * k * a.powi(i as i32) * da * b.powi(i as i32 + 1);
        }
        s
    });
    let dv: Fn2 = Arc::new(move |u, v| {
        let (a, b) = (fu3.eval(u), gv3.eval(v));
        let db = gv3.deriv(v);
        let mut s = 0.0;
        for (i, c) in c3.iter().enumerate() {
            let k = (i + 1) as f64;
            s += c * k * a.powi(i as i32 + 1) * b.powi(i as i32) * db;
        }
        s
    });
    ScalarField2::new(value).with_partials(du, dv)
}

fn wrap_row(row: ScalarField2, w: C1Fn) -> ScalarField2 {
    let (r1, r2, r3) = (row.clone(), row.clone(), row);
    let (w1, w2, w3) = (w.clone(), w.clone(), w);
    let value: Fn2 = Arc::new(move |u, v| w1.eval(r1.eval(u, v)));
    let du: Fn2 = Arc::new(move |u, v| w2.deriv(r2.eval(u, v)) * r2.du_at(u, v));
    let dv: Fn2 = Arc::new(move |u, v| w3.deriv(r3.eval(u, v)) * r3.dv_at(u, v));
    ScalarField2::new(value).with_partials(du, dv)
}

/// Assemble a triple from a family-1 spec with analytic partials by term
/// differentiation.
pub fn triple_from_type1(s: &Type1Spec) -> MarchingTriple {
    MarchingTriple::new(
        series_row(s.a1.clone(), s.l.clone(), s.big_x.clone()),
        series_row(s.a2.clone(), s.m.clone(), s.big_y.clone()),
        series_row(s.a3.clone(), s.n.clone(), s.big_z.clone()),
        s.v0,
        s.v_domain,
    )
}

/// Assemble a triple from a family-2 spec; partials use the chain rule.
pub fn triple_from_type2(s: &Type2Spec) -> MarchingTriple {
    let b = &s.base;
    MarchingTriple::new(
        wrap_row(series_row(b.a1.clone(), b.l.clone(), b.big_x.clone()), s.f.clone()),
        wrap_row(series_row(b.a2.clone(), b.m.clone(), b.big_y.clone()), s.g.clone()),
        wrap_row(series_row(b.a3.clone(), b.n.clone(), b.big_z.clone()), s.h.clone()),
        b.v0,
        b.v_domain,
    )
}

/// Residuals of the direct isoasymptotic conditions on a triple:
/// `x = y = z = 0` and `dz/dv = 0` along v = v0.
#[derive(Debug, Clone)]
pub struct TheoremCheck {
    pub x_residual: f64,
    pub y_residual: f64,
    pub z_residual: f64,
    pub dzdv_residual: f64,
    pub passed: bool,
}

pub fn check_theorem_conditions(t: &MarchingTriple, u_samples: &[f64], tol: f64) -> TheoremCheck {
    assert!(!u_samples.is_empty());
    let mut c = TheoremCheck { x_residual: 0.0, y_residual: 0.0, z_residual: 0.0, dzdv_residual: 0.0, passed: false };
    for &u in u_samples {
        c.x_residual = c.x_residual.max(t.x.eval(u, t.v0).abs());
        c.y_residual = c.y_residual.max(t.y.eval(u, t.v0).abs());
        c.z_residual = c.z_residual.max(t.z.eval(u, t.v0).abs());
        c.dzdv_residual = c.dzdv_residual.max(t.z.dv_at(u, t.v0).abs());
    }
    c.passed = c.x_residual <= tol && c.y_residual <= tol && c.z_residual <= tol && c.dzdv_residual <= tol;
    c
}

/// Which disjunct of the structured sufficient condition held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionBranch {
    A31Zero,
    NZero,
    HPrimeZero,
    DzDvZero,
}

#[derive(Debug, Clone)]
pub struct ConditionCheck {
    /// Max of |X(v0)|, |Y(v0)|, |Z(v0)| (plus |f(0)|, |g(0)|, |h(0)| for
    /// family 2).
    pub anchor_residual: f64,
    pub branches_held: Vec<ConditionBranch>,
    pub passed: bool,
}

pub fn check_type1_conditions(s: &Type1Spec, u_samples: &[f64], tol: f64) -> ConditionCheck {
    let anchor = s
        .big_x
        .eval(s.v0)
        .abs()
        .max(s.big_y.eval(s.v0).abs())
        .max(s.big_z.eval(s.v0).abs());
    let mut branches = Vec::new();
    if s.a3.first().copied().unwrap_or(0.0).abs() <= tol {
        branches.push(ConditionBranch::A31Zero);
    }
    let n_max = u_samples.iter().map(|&u| s.n.eval(u).abs()).fold(0.0f64, f64::max);
    if n_max <= tol {
        branches.push(ConditionBranch::NZero);
    }
    if s.big_z.deriv(s.v0).abs() <= tol {
        branches.push(ConditionBranch::DzDvZero);
    }
    let passed = anchor <= tol && !branches.is_empty();
    ConditionCheck { anchor_residual: anchor, branches_held: branches, passed }
}

pub fn check_type2_conditions(s: &Type2Spec, u_samples: &[f64], tol: f64) -> ConditionCheck {
    let mut c = check_type1_conditions(&s.base, u_samples, tol);
    let wrap_anchor = s.f.eval(0.0).abs().max(s.g.eval(0.0).abs()).max(s.h.eval(0.0).abs());
    c.anchor_residual = c.anchor_residual.max(wrap_anchor);
    if s.h.deriv(0.0).abs() <= tol {
        c.branches_held.push(ConditionBranch::HPrimeZero);
    }
    c.passed = c.anchor_residual <= tol && !c.branches_held.is_empty();
    c
}

/// Equispaced sample grid helper.
pub fn sample_grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
}
