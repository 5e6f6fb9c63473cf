//! Closed expression vocabulary for config files: enough to write every
//! built-in example, with exact symbolic derivatives and no general
//! interpreter.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::CurveFn;
use crate::marching::{C1Fn, Fn1};
use crate::mlinalg::MVec3;

/// Affine argument `scale * t + offset` for the transcendental atoms.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Affine {
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub offset: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for Affine {
    fn default() -> Self {
        Self { scale: 1.0, offset: 0.0 }
    }
}

impl Affine {
    fn apply(self, t: f64) -> f64 {
        self.scale * t + self.offset
    }
}

/// Expression tree. Externally tagged: `{"sin": {"scale": 3}}`,
/// `{"poly": [0, 1]}`, `{"prod": [...]}` and so on.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum Expr {
    Const(f64),
    /// Coefficients in ascending degree.
    Poly(Vec<f64>),
    Sin(#[serde(default)] Affine),
    Cos(#[serde(default)] Affine),
    Sinh(#[serde(default)] Affine),
    Cosh(#[serde(default)] Affine),
    Pow(Box<Expr>, u32),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
}

impl Expr {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Poly(c) => c.iter().rev().fold(0.0, |acc, &k| acc * t + k),
            Expr::Sin(a) => a.apply(t).sin(),
            Expr::Cos(a) => a.apply(t).cos(),
            Expr::Sinh(a) => a.apply(t).sinh(),
            Expr::Cosh(a) => a.apply(t).cosh(),
            Expr::Pow(e, n) => e.eval(t).powi(*n as i32),
            Expr::Sum(es) => es.iter().map(|e| e.eval(t)).sum(),
            Expr::Prod(es) => es.iter().map(|e| e.eval(t)).product(),
        }
    }

    /// Exact derivative as another expression.
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Poly(c) => {
                if c.len() <= 1 {
                    Expr::Const(0.0)
                } else {
                    Expr::Poly(
                        c.iter().enumerate().skip(1).map(|(i, &k)| i as f64 * k).collect(),
                    )
                }
            }
            Expr::Sin(a) => Expr::Prod(vec![Expr::Const(a.scale), Expr::Cos(*a)]),
            Expr::Cos(a) => Expr::Prod(vec![Expr::Const(-a.scale), Expr::Sin(*a)]),
            Expr::Sinh(a) => Expr::Prod(vec![Expr::Const(a.scale), Expr::Cosh(*a)]),
            Expr::Cosh(a) => Expr::Prod(vec![Expr::Const(a.scale), Expr::Sinh(*a)]),
            Expr::Pow(e, n) => match n {
                0 => Expr::Const(0.0),
                1 => e.differentiate(),
                n => Expr::Prod(vec![
                    Expr::Const(*n as f64),
                    Expr::Pow(e.clone(), n - 1),
                    e.differentiate(),
                ]),
            },
            Expr::Sum(es) => Expr::Sum(es.iter().map(Expr::differentiate).collect()),
            Expr::Prod(es) => {
                // sum over factors of (d factor) * (other factors)
                let mut terms = Vec::with_capacity(es.len());
                for (i, e) in es.iter().enumerate() {
                    let mut factors = vec![e.differentiate()];
                    for (j, f) in es.iter().enumerate() {
                        if j != i {
                            factors.push(f.clone());
                        }
                    }
                    terms.push(Expr::Prod(factors));
                }
                Expr::Sum(terms)
            }
        }
    }

    pub fn to_fn(&self) -> Fn1 {
        let e = self.clone();
        Arc::new(move |t| e.eval(t))
    }

    pub fn to_c1(&self) -> C1Fn {
        C1Fn::new(self.to_fn(), self.differentiate().to_fn())
    }
}

/// Three component expressions as a curve, with exact derivatives up to
/// third order.
pub fn exprs_to_curve_fns(c: &[Expr; 3]) -> (CurveFn, CurveFn, CurveFn, CurveFn) {
    let vec_fn = |e: [Expr; 3]| -> CurveFn {
        Arc::new(move |u| MVec3::new(e[0].eval(u), e[1].eval(u), e[2].eval(u)))
    };
    let d = |e: &[Expr; 3]| -> [Expr; 3] {
        [e[0].differentiate(), e[1].differentiate(), e[2].differentiate()]
    };
    let d1 = d(c);
    let d2 = d(&d1);
    let d3 = d(&d2);
    (vec_fn(c.clone()), vec_fn(d1), vec_fn(d2), vec_fn(d3))
}
