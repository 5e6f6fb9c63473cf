//! Config-file schema: a JSON document describing a curve (preset or
//! expressions), a marching spec, domains, grid and tolerances.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::ParamCurve;
use crate::expr::{exprs_to_curve_fns, Expr};
use crate::marching::{
    triple_from_type1, triple_from_type2, Fn2, MarchingTriple, ScalarField2, Type1Spec, Type2Spec,
};
use crate::presets::{get_preset, MarchingSpec, PresetError};
use crate::surface::SurfaceFamily;
use crate::verify::ToleranceSet;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Preset(#[from] PresetError),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveSpec {
    Preset(String),
    Custom {
        position: [Expr; 3],
        domain: (f64, f64),
        #[serde(default = "one", skip_serializing_if = "is_one")]
        e3_sign: f64,
    },
}

fn one() -> f64 {
    1.0
}
fn is_one(x: &f64) -> bool {
    *x == 1.0
}

/// One separable term `cu(u) * cv(v)`; a free marching row is a sum of
/// such terms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparableTerm {
    pub u: Expr,
    pub v: Expr,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct FreeRows {
    #[serde(default)]
    pub x: Vec<SeparableTerm>,
    #[serde(default)]
    pub y: Vec<SeparableTerm>,
    #[serde(default)]
    pub z: Vec<SeparableTerm>,
}

/// Series row of a structured spec: coefficients plus the u-factor and
/// v-factor expressions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesRow {
    #[serde(default)]
    pub coeffs: Vec<f64>,
    #[serde(default = "const_one")]
    pub ufactor: Expr,
    pub vfactor: Expr,
}

fn const_one() -> Expr {
    Expr::Const(1.0)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Type1Schema {
    pub x: SeriesRow,
    pub y: SeriesRow,
    pub z: SeriesRow,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Type2Schema {
    #[serde(flatten)]
    pub base: Type1Schema,
    pub f: Expr,
    pub g: Expr,
    pub h: Expr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarchingSchema {
    Free(FreeRows),
    Type1(Type1Schema),
    Type2(Type2Schema),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub curve: CurveSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marching: Option<MarchingSchema>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_domain: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_domain: Option<(f64, f64)>,
    #[serde(default = "default_grid")]
    pub grid: (usize, usize),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

fn default_grid() -> (usize, usize) {
    (50, 50)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
pub struct ToleranceOverrides {
    pub exact: Option<f64>,
    pub fd: Option<f64>,
    pub null_band: Option<f64>,
    pub frame: Option<f64>,
    pub minimal: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, mut t: ToleranceSet) -> ToleranceSet {
        if let Some(x) = self.exact {
            t.exact = x;
        }
        if let Some(x) = self.fd {
            t.fd = x;
        }
        if let Some(x) = self.null_band {
            t.null_band = x;
        }
        if let Some(x) = self.frame {
            t.frame = x;
        }
        if let Some(x) = self.minimal {
            t.minimal = x;
        }
        t
    }
}

pub fn read_config(text: &str) -> Result<FamilyConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// The family a config describes, plus its structured spec when one was
/// given (needed for coefficient sweeps).
pub struct BuiltFamily {
    pub id: String,
    pub family: SurfaceFamily,
    pub spec: Option<MarchingSpec>,
    pub grid: (usize, usize),
    pub tolerances: ToleranceSet,
    pub minimal_claim: bool,
}

fn free_row(terms: &[SeparableTerm]) -> ScalarField2 {
    if terms.is_empty() {
        return ScalarField2::zero();
    }
    let build = |pick_du: bool, pick_dv: bool, terms: &[SeparableTerm]| -> Fn2 {
        let parts: Vec<(Expr, Expr)> = terms
            .iter()
            .map(|t| {
                let cu = if pick_du { t.u.differentiate() } else { t.u.clone() };
                let cv = if pick_dv { t.v.differentiate() } else { t.v.clone() };
                (cu, cv)
            })
            .collect();
        Arc::new(move |u, v| parts.iter().map(|(cu, cv)| cu.eval(u) * cv.eval(v)).sum())
    };
    ScalarField2::new(build(false, false, terms))
        .with_partials(build(true, false, terms), build(false, true, terms))
}

fn series_from_schema(r: &SeriesRow) -> (Vec<f64>, crate::marching::C1Fn, crate::marching::C1Fn) {
    (r.coeffs.clone(), r.ufactor.to_c1(), r.vfactor.to_c1())
}

fn type1_from_schema(s: &Type1Schema, v0: f64, v_domain: (f64, f64)) -> Type1Spec {
    let (a1, l, big_x) = series_from_schema(&s.x);
    let (a2, m, big_y) = series_from_schema(&s.y);
    let (a3, n, big_z) = series_from_schema(&s.z);
    Type1Spec { a1, a2, a3, l, m, n, big_x, big_y, big_z, v0, v_domain }
}

pub fn build_family(cfg: &FamilyConfig) -> Result<BuiltFamily, ConfigError> {
    let tolerances = cfg
        .tolerances
        .unwrap_or_default()
        .apply(ToleranceSet::default());

    // curve, base domains and (for presets) fallback triple/spec
    let (id, curve, u_default, preset_fallback) = match &cfg.curve {
        CurveSpec::Preset(name) => {
            let p = get_preset(name)?;
            let u = p.family.u_domain;
            (
                p.id.to_string(),
                p.family.curve.clone(),
                Some(u),
                Some((p.family.triple.clone(), p.spec.clone(), p.claims.minimal)),
            )
        }
        CurveSpec::Custom { position, domain, e3_sign } => {
            let (p, d1, d2, d3) = exprs_to_curve_fns(position);
            let c = ParamCurve::new(p, *domain)
                .with_derivatives(d1, d2, d3)
                .with_e3_sign(*e3_sign);
            ("custom".to_string(), c, Some(*domain), None)
        }
    };

    let u_domain = cfg
        .u_domain
        .or(u_default)
        .ok_or_else(|| ConfigError::Invalid("missing u_domain".into()))?;

    let (triple, spec, minimal_claim) = match &cfg.marching {
        None => {
            let (triple, spec, minimal) = preset_fallback
                .ok_or_else(|| ConfigError::Invalid("custom curve requires a marching spec".into()))?;
            (triple, spec, minimal)
        }
        Some(schema) => {
            let v_domain = cfg
                .v_domain
                .or(preset_fallback.as_ref().map(|(t, _, _)| t.v_domain))
                .ok_or_else(|| ConfigError::Invalid("missing v_domain".into()))?;
            let v0 = cfg
                .v0
                .or(preset_fallback.as_ref().map(|(t, _, _)| t.v0))
                .ok_or_else(|| ConfigError::Invalid("missing v0".into()))?;
            if v0 < v_domain.0 || v0 > v_domain.1 {
                return Err(ConfigError::Invalid(format!(
                    "v0 = {v0} outside v_domain [{}, {}]",
                    v_domain.0, v_domain.1
                )));
            }
            match schema {
                MarchingSchema::Free(rows) => {
                    let t = MarchingTriple::new(
                        free_row(&rows.x),
                        free_row(&rows.y),
                        free_row(&rows.z),
                        v0,
                        v_domain,
                    );
                    (t, None, false)
                }
                MarchingSchema::Type1(s) => {
                    let spec = type1_from_schema(s, v0, v_domain);
                    (triple_from_type1(&spec), Some(MarchingSpec::Type1(spec)), false)
                }
                MarchingSchema::Type2(s) => {
                    let base = type1_from_schema(&s.base, v0, v_domain);
                    let spec = Type2Spec {
                        base,
                        f: s.f.to_c1(),
                        g: s.g.to_c1(),
                        h: s.h.to_c1(),
                    };
                    (triple_from_type2(&spec), Some(MarchingSpec::Type2(spec)), false)
                }
            }
        }
    };

    let family = SurfaceFamily::new(curve, triple, u_domain);
    Ok(BuiltFamily { id, family, spec, grid: cfg.grid, tolerances, minimal_claim })
}
