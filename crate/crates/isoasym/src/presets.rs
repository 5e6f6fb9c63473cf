//! Ready-made surface families: seven worked examples plus two synthetic
//! calibration controls ("cylinder", "negcontrol").

use std::f64::consts::PI;
use std::sync::Arc;

use thiserror::Error;

use crate::curve::{CurveFn, ParamCurve};
use crate::marching::{
    triple_from_type1, triple_from_type2, C1Fn, Fn2, MarchingTriple, ScalarField2, Type1Spec,
    Type2Spec,
};
use crate::mlinalg::{CausalClass, MVec3};
use crate::surface::{SurfFn, SurfaceFamily};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresetError {
    #[error("unknown preset id: {0}")]
    UnknownPreset(String),
}

/// Claims carried by a preset, checked as advisory (non-gating) items.
#[derive(Debug, Clone, Copy)]
pub struct PresetClaims {
    pub curve_class: CausalClass,
    pub surface_class: Option<CausalClass>,
    pub minimal: bool,
}

/// Structured marching spec, retained when the preset's triple comes
/// from a family-1 or family-2 series (enables coefficient sweeps).
#[derive(Clone)]
pub enum MarchingSpec {
    Type1(Type1Spec),
    Type2(Type2Spec),
}

pub struct Preset {
    pub id: &'static str,
    pub description: &'static str,
    pub family: SurfaceFamily,
    pub printed_surface: Option<SurfFn>,
    /// Frame exactly as printed in the source example, where one exists
    /// and differs from (or cross-checks) the computed frame.
    pub printed_frame: Option<[CurveFn; 3]>,
    pub spec: Option<MarchingSpec>,
    pub claims: PresetClaims,
    pub notes: &'static str,
}

/// Stable id order; part of the CLI contract.
pub const PRESET_IDS: [&str; 9] = [
    "ex3_1",
    "ex4_1",
    "ex4_2",
    "helicoid1",
    "helicoid2",
    "helicoid3",
    "enneper2",
    "cylinder",
    "negcontrol",
];

/// Historical aliases accepted on input.
pub fn resolve_alias(id: &str) -> &str {
    match id {
        "ex4_3" => "helicoid1",
        "ex4_4" => "helicoid2",
        "ex4_5" => "helicoid3",
        "ex4_6" => "enneper2",
        other => other,
    }
}

pub fn list_presets() -> Vec<(&'static str, &'static str)> {
    PRESET_IDS
        .iter()
        .map(|id| {
            let p = get_preset(id).expect("builtin preset");
            (p.id, p.description)
        })
        .collect()
}

pub fn get_preset(id: &str) -> Result<Preset, PresetError> {
    match resolve_alias(id) {
        "ex3_1" => Ok(ex3_1()),
        "ex4_1" => Ok(ex4_1()),
        "ex4_2" => Ok(ex4_2()),
        "helicoid1" => Ok(helicoid1()),
        "helicoid2" => Ok(helicoid2()),
        "helicoid3" => Ok(helicoid3()),
        "enneper2" => Ok(enneper2()),
        "cylinder" => Ok(cylinder()),
        "negcontrol" => Ok(negcontrol()),
        other => Err(PresetError::UnknownPreset(other.to_string())),
    }
}

fn circle_curve(domain: (f64, f64)) -> ParamCurve {
    ParamCurve::new(Arc::new(|u: f64| MVec3::new(u.cos(), u.sin(), 0.0)), domain)
        .with_derivatives(
            Arc::new(|u: f64| MVec3::new(-u.sin(), u.cos(), 0.0)),
            Arc::new(|u: f64| MVec3::new(-u.cos(), -u.sin(), 0.0)),
            Arc::new(|u: f64| MVec3::new(u.sin(), -u.cos(), 0.0)),
        )
}

fn field(value: Fn2, du: Fn2, dv: Fn2) -> ScalarField2 {
    ScalarField2::new(value).with_partials(du, dv)
}

fn family(
    curve: ParamCurve,
    triple: MarchingTriple,
    u_domain: (f64, f64),
    claims: &PresetClaims,
) -> SurfaceFamily {
    let mut f = SurfaceFamily::new(curve, triple, u_domain);
    f.claimed_curve_class = Some(claims.curve_class);
    f.claimed_surface_class = claims.surface_class;
    f
}

fn ex3_1() -> Preset {
    let claims = PresetClaims {
        curve_class: CausalClass::Spacelike,
        surface_class: Some(CausalClass::Spacelike),
        minimal: false,
    };
    let v0 = 1.5 * PI;
    let spec = Type1Spec {
        a1: vec![],
        a2: vec![1.0, 0.5, 0.5, 0.5],
        a3: vec![0.5, 0.5, 0.5, 0.5],
        l: C1Fn::constant(1.0),
        m: C1Fn::constant(1.0),
        n: C1Fn::constant(1.0),
        big_x: C1Fn::new(Arc::new(move |v: f64| v - v0), Arc::new(|_| 1.0)),
        big_y: C1Fn::cos(),
        big_z: C1Fn::new(Arc::new(|v: f64| 1.0 + v.sin()), Arc::new(|v: f64| v.cos())),
        v0,
        v_domain: (4.0, 5.0),
    };
    let triple = triple_from_type1(&spec);
    let curve = circle_curve((0.0, 2.0 * PI));
    let printed: SurfFn = Arc::new(|u, v| {
        let c = v.cos();
        let y = c + 0.5 * (c.powi(2) + c.powi(3) + c.powi(4));
        let s = 1.0 + v.sin();
        let z = 0.5 * (s + s.powi(2) + s.powi(3) + s.powi(4));
        MVec3::new(u.cos() * (1.0 - y), u.sin() * (1.0 - y), z)
    });
    Preset {
        id: "ex3_1",
        description: "circle spine, cosine/sine power-series triple, v0 = 3pi/2",
        family: family(curve, triple, (0.0, 2.0 * PI), &claims),
        printed_surface: Some(printed),
        printed_frame: Some([
            Arc::new(|u: f64| MVec3::new(-u.sin(), u.cos(), 0.0)),
            Arc::new(|u: f64| MVec3::new(-u.cos(), -u.sin(), 0.0)),
            Arc::new(|_| MVec3::new(0.0, 0.0, 1.0)),
        ]),
        spec: Some(MarchingSpec::Type1(spec)),
        claims,
        notes: "all series coefficients 1/2 except the leading cosine term",
    }
}

fn ex4_1() -> Preset {
    let claims = PresetClaims {
        curve_class: CausalClass::Timelike,
        surface_class: Some(CausalClass::Timelike),
        minimal: false,
    };
    let curve = ParamCurve::new(
        Arc::new(|u: f64| MVec3::new(u.cosh(), 0.0, u.sinh())),
        (-2.0, 2.0),
    )
    .with_derivatives(
        Arc::new(|u: f64| MVec3::new(u.sinh(), 0.0, u.cosh())),
        Arc::new(|u: f64| MVec3::new(u.cosh(), 0.0, u.sinh())),
        Arc::new(|u: f64| MVec3::new(u.sinh(), 0.0, u.cosh())),
    );
    let triple = MarchingTriple::new(
        ScalarField2::zero(),
        field(
            Arc::new(|_, v: f64| v.sin()),
            Arc::new(|_, _| 0.0),
            Arc::new(|_, v: f64| v.cos()),
        ),
        field(
            Arc::new(|u: f64, v: f64| u * v * v),
            Arc::new(|_, v: f64| v * v),
            Arc::new(|u: f64, v: f64| 2.0 * u * v),
        ),
        0.0,
        (-1.0, 1.0),
    );
    let printed: SurfFn = Arc::new(|u: f64, v: f64| {
        MVec3::new(
            u.cosh() * (1.0 + v.sin()),
            u * v * v,
            u.sinh() * (1.0 + v.sin()),
        )
    });
    Preset {
        id: "ex4_1",
        description: "hyperbola spine, y = sin v, z = u v^2, v0 = 0",
        family: family(curve, triple, (-2.0, 2.0), &claims),
        printed_surface: Some(printed),
        printed_frame: Some([
            Arc::new(|u: f64| MVec3::new(u.sinh(), 0.0, u.cosh())),
            Arc::new(|u: f64| MVec3::new(u.cosh(), 0.0, u.sinh())),
            Arc::new(|_| MVec3::new(0.0, 1.0, 0.0)),
        ]),
        spec: None,
        claims,
        notes: "z depends on u; the anchor v0 = 0 kills both z and dz/dv there",
    }
}

fn ex4_2() -> Preset {
    let claims = PresetClaims {
        curve_class: CausalClass::Spacelike,
        surface_class: Some(CausalClass::Spacelike),
        minimal: false,
    };
    let base = Type1Spec {
        a1: vec![],
        a2: vec![1.0],
        a3: vec![1.0],
        l: C1Fn::constant(1.0),
        m: C1Fn::constant(1.0),
        n: C1Fn::constant(1.0),
        big_x: C1Fn::identity(),
        big_y: C1Fn::sinh(),
        big_z: C1Fn::new(Arc::new(|v: f64| 1.0 - v.cosh()), Arc::new(|v: f64| -v.sinh())),
        v0: 0.0,
        v_domain: (0.0, 0.5),
    };
    let spec = Type2Spec {
        base,
        f: C1Fn::sin(),
        g: C1Fn::sin(),
        h: C1Fn::sin(),
    };
    let triple = triple_from_type2(&spec);
    let curve = circle_curve((0.0, 2.0 * PI));
    let printed: SurfFn = Arc::new(|u: f64, v: f64| {
        let y = v.sinh().sin();
        let z = (1.0 - v.cosh()).sin();
        MVec3::new(u.cos() * (1.0 - y), u.sin() * (1.0 - y), z)
    });
    Preset {
        id: "ex4_2",
        description: "circle spine, sine-wrapped sinh/cosh series, v0 = 0",
        family: family(curve, triple, (0.0, 2.0 * PI), &claims),
        printed_surface: Some(printed),
        printed_frame: None,
        spec: Some(MarchingSpec::Type2(spec)),
        claims,
        notes: "single-term series (a21 = a31 = 1); condition holds because Z'(0) = 0",
    }
}

/// y(u,v) = v against the normalized frame; equals the source's y = v/k
/// against its unnormalized middle vector of norm k.
fn y_equals_v() -> MarchingTriple {
    MarchingTriple::new(
        ScalarField2::zero(),
        field(
            Arc::new(|_, v: f64| v),
            Arc::new(|_, _| 0.0),
            Arc::new(|_, _| 1.0),
        ),
        ScalarField2::zero(),
        0.0,
        (-1.0, 1.0),
    )
}

fn helicoid1() -> Preset {
    let claims = PresetClaims {
        curve_class: CausalClass::Timelike,
        surface_class: Some(CausalClass::Timelike),
        minimal: true,
    };
    let curve = ParamCurve::new(
        Arc::new(|u: f64| {
            MVec3::new(4.0 / 9.0 * (3.0 * u).cos(), 4.0 / 9.0 * (3.0 * u).sin(), 5.0 / 3.0 * u)
        }),
        (0.0, 2.0 * PI),
    )
    .with_derivatives(
        Arc::new(|u: f64| {
            MVec3::new(-4.0 / 3.0 * (3.0 * u).sin(), 4.0 / 3.0 * (3.0 * u).cos(), 5.0 / 3.0)
        }),
        Arc::new(|u: f64| MVec3::new(-4.0 * (3.0 * u).cos(), -4.0 * (3.0 * u).sin(), 0.0)),
        Arc::new(|u: f64| MVec3::new(12.0 * (3.0 * u).sin(), -12.0 * (3.0 * u).cos(), 0.0)),
    );
    let printed: SurfFn = Arc::new(|u: f64, v: f64| {
        MVec3::new(
            (4.0 / 9.0 - v) * (3.0 * u).cos(),
            (4.0 / 9.0 - v) * (3.0 * u).sin(),
            5.0 / 3.0 * u,
        )
    });
    Preset {
        id: "helicoid1",
        description: "helicoid of the 1st kind: circular helix spine, y = v",
        family: family(curve, y_equals_v(), (0.0, 2.0 * PI), &claims),
        printed_surface: Some(printed),
        printed_frame: None,
        spec: None,
        claims,
        notes: "y = v here; the source y = v/4 pairs with its norm-4 middle vector",
    }
}

fn helicoid2() -> Preset {
    let claims = PresetClaims {
        curve_class: CausalClass::Timelike,
        surface_class: Some(CausalClass::Timelike),
        minimal: true,
    };
    let curve = ParamCurve::new(
        Arc::new(|u: f64| {
            MVec3::new(-5.0 / 9.0 * (3.0 * u).cosh(), 4.0 / 3.0 * u, -5.0 / 9.0 * (3.0 * u).sinh())
        }),
        (-1.0, 1.0),
    )
    .with_derivatives(
        Arc::new(|u: f64| {
            MVec3::new(-5.0 / 3.0 * (3.0 * u).sinh(), 4.0 / 3.0, -5.0 / 3.0 * (3.0 * u).cosh())
        }),
        Arc::new(|u: f64| MVec3::new(-5.0 * (3.0 * u).cosh(), 0.0, -5.0 * (3.0 * u).sinh())),
        Arc::new(|u: f64| MVec3::new(-15.0 * (3.0 * u).sinh(), 0.0, -15.0 * (3.0 * u).cosh())),
    );
    let printed: SurfFn = Arc::new(|u: f64, v: f64| {
        MVec3::new(
            (-5.0 / 9.0 - v) * (3.0 * u).cosh(),
            4.0 / 3.0 * u,
            (-5.0 / 9.0 - v) * (3.0 * u).sinh(),
        )
    });
    Preset {
        id: "helicoid2",
        description: "helicoid of the 2nd kind: hyperbolic helix spine, y = v",
        family: family(curve, y_equals_v(), (-1.0, 1.0), &claims),
        printed_surface: Some(printed),
        printed_frame: None,
        spec: None,
        claims,
        notes: "y = v here; the source y = v/5 pairs with its norm-5 middle vector",
    }
}

fn helicoid3() -> Preset {
    let claims = PresetClaims {
        curve_class: CausalClass::Spacelike,
        surface_class: Some(CausalClass::Timelike),
        minimal: true,
    };
    let curve = ParamCurve::new(
        Arc::new(|u: f64| {
            MVec3::new(-3.0 / 25.0 * (5.0 * u).sinh(), 4.0 / 5.0 * u, -3.0 / 25.0 * (5.0 * u).cosh())
        }),
        (-1.0, 1.0),
    )
    .with_derivatives(
        Arc::new(|u: f64| {
            MVec3::new(-3.0 / 5.0 * (5.0 * u).cosh(), 4.0 / 5.0, -3.0 / 5.0 * (5.0 * u).sinh())
        }),
        Arc::new(|u: f64| MVec3::new(-3.0 * (5.0 * u).sinh(), 0.0, -3.0 * (5.0 * u).cosh())),
        Arc::new(|u: f64| MVec3::new(-15.0 * (5.0 * u).cosh(), 0.0, -15.0 * (5.0 * u).sinh())),
    )
    .with_e3_sign(-1.0);
    let printed: SurfFn = Arc::new(|u: f64, v: f64| {
        MVec3::new(
            (-3.0 / 25.0 - v) * (5.0 * u).sinh(),
            4.0 / 5.0 * u,
            (-3.0 / 25.0 - v) * (5.0 * u).cosh(),
        )
    });
    Preset {
        id: "helicoid3",
        description: "helicoid of the 3rd kind: spacelike spine, timelike principal normal, y = v",
        family: family(curve, y_equals_v(), (-1.0, 1.0), &claims),
        printed_surface: Some(printed),
        printed_frame: None,
        spec: None,
        claims,
        notes: "y = v here (source y = v/3); binormal orientation flag flipped to match",
    }
}

fn enneper2() -> Preset {
    let claims = PresetClaims {
        curve_class: CausalClass::Timelike,
        surface_class: Some(CausalClass::Timelike),
        minimal: true,
    };
    let curve = ParamCurve::new(
        Arc::new(|u: f64| {
            MVec3::new(u * u / 2.0, -u.powi(3) / 6.0, -u.powi(3) / 6.0 + u)
        }),
        (-2.0, 2.0),
    )
    .with_derivatives(
        Arc::new(|u: f64| MVec3::new(u, -u * u / 2.0, -u * u / 2.0 + 1.0)),
        Arc::new(|u: f64| MVec3::new(1.0, -u, -u)),
        Arc::new(|_| MVec3::new(0.0, -1.0, -1.0)),
    );
    let printed: SurfFn = Arc::new(|u: f64, v: f64| {
        MVec3::new(
            u * u / 2.0 + v,
            -u.powi(3) / 6.0 - u * v,
            -u.powi(3) / 6.0 - u * v + u,
        )
    });
    Preset {
        id: "enneper2",
        description: "conjugate Enneper surface of the 2nd kind, carried exactly as printed",
        family: family(curve, y_equals_v(), (-2.0, 2.0), &claims),
        printed_surface: Some(printed),
        printed_frame: Some([
            Arc::new(|u: f64| MVec3::new(u, -u * u / 2.0, -u * u / 2.0 + 1.0)),
            Arc::new(|u: f64| MVec3::new(1.0, -u, -u)),
            Arc::new(|u: f64| MVec3::new(-u, -u * u / 2.0 - 1.0, -u * u / 2.0)),
        ]),
        spec: None,
        claims,
        notes: "known inconsistency: the spine is not unit speed (<a',a'> = 2u^2 - 1) and \
                the printed frame is not orthonormal; the verifier reports both instead of \
                silently correcting them",
    }
}

fn cylinder() -> Preset {
    let claims = PresetClaims {
        curve_class: CausalClass::Spacelike,
        surface_class: Some(CausalClass::Timelike),
        minimal: false,
    };
    let triple = MarchingTriple::new(
        ScalarField2::zero(),
        ScalarField2::zero(),
        field(
            Arc::new(|_, v: f64| v),
            Arc::new(|_, _| 0.0),
            Arc::new(|_, _| 1.0),
        ),
        0.0,
        (-1.0, 1.0),
    );
    Preset {
        id: "cylinder",
        description: "calibration control: circular cylinder, |H| = 1/2 exactly",
        family: family(circle_curve((0.0, 2.0 * PI)), triple, (0.0, 2.0 * PI), &claims),
        printed_surface: Some(Arc::new(|u: f64, v: f64| MVec3::new(u.cos(), u.sin(), v))),
        printed_frame: None,
        spec: None,
        claims,
        notes: "z = v makes dz/dv = 1, so the spine is isoparametric but not asymptotic",
    }
}

fn negcontrol() -> Preset {
    let mut p = cylinder();
    p.id = "negcontrol";
    p.description = "negative control: same cylinder, exercised as an expected failure";
    p.notes = "asymptotic residual is exactly kappa * phi2 = 1 at every u";
    p.claims.surface_class = Some(CausalClass::Timelike);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::frenet_at;
    use crate::mlinalg::inner;
    use crate::surface::evaluate_surface;

    #[test]
    fn listing_is_stable_and_complete() {
        let l = list_presets();
        assert_eq!(l.len(), 9);
        assert_eq!(l[0].0, "ex3_1");
        assert!(l.iter().any(|(id, _)| *id == "helicoid1"));
        assert!(l.iter().any(|(id, _)| *id == "cylinder"));
        let ids: Vec<_> = l.iter().map(|(id, _)| *id).collect();
        assert_eq!(ids, PRESET_IDS);
    }

    #[test]
    fn unknown_and_alias_lookup() {
        assert!(matches!(get_preset("nope"), Err(PresetError::UnknownPreset(_))));
        assert_eq!(get_preset("ex4_3").unwrap().id, "helicoid1");
        assert_eq!(get_preset("ex4_6").unwrap().id, "enneper2");
    }

    #[test]
    fn printed_surface_spot_values() {
        let p = get_preset("helicoid1").unwrap();
        let f = p.printed_surface.unwrap();
        let q = f(0.0, 0.1);
        assert!((q - MVec3::new(4.0 / 9.0 - 0.1, 0.0, 0.0)).euclid_norm() < 1e-15);

        let p = get_preset("helicoid2").unwrap();
        let f = p.printed_surface.unwrap();
        let q = f(0.0, 0.0);
        assert!((q - MVec3::new(-5.0 / 9.0, 0.0, 0.0)).euclid_norm() < 1e-15);
    }

    #[test]
    fn constructed_surface_matches_printed_form() {
        for id in ["ex3_1", "ex4_1", "ex4_2", "helicoid1", "helicoid2", "helicoid3", "cylinder"] {
            let p = get_preset(id).unwrap();
            let printed = p.printed_surface.as_ref().unwrap();
            let s = &p.family;
            let (ul, uh) = s.u_domain;
            let (vl, vh) = s.v_domain;
            let mut worst = 0.0f64;
            for i in 0..50 {
                for j in 0..50 {
                    let u = ul + (uh - ul) * i as f64 / 49.0;
                    let v = vl + (vh - vl) * j as f64 / 49.0;
                    let d = (evaluate_surface(s, u, v).unwrap() - printed(u, v)).euclid_norm();
                    worst = worst.max(d);
                }
            }
            assert!(worst < 1e-9, "{id}: worst {worst:.3e}");
        }
    }

    #[test]
    fn enneper2_constructed_surface_diverges_from_printed() {
        let p = get_preset("enneper2").unwrap();
        let printed = p.printed_surface.as_ref().unwrap();
        // frenet fails off the isolated unit-speed points, and where it
        // happens to succeed the normalized frame no longer reproduces
        // the printed surface
        let mut diverged = false;
        for i in 0..20 {
            let u = -1.9 + 3.8 * i as f64 / 19.0;
            match evaluate_surface(&p.family, u, 0.5) {
                Err(_) => diverged = true,
                Ok(q) => {
                    if (q - printed(u, 0.5)).euclid_norm() > 1e-6 {
                        diverged = true;
                    }
                }
            }
        }
        assert!(diverged);
    }

    #[test]
    fn enneper2_printed_frame_gram_defects() {
        let p = get_preset("enneper2").unwrap();
        let [e1, e2, e3] = p.printed_frame.unwrap();
        for &u in &[-1.0, 0.5, 1.0, 1.7] {
            assert!((inner(e1(u), e2(u)) - 2.0 * u).abs() < 1e-12);
            assert!((inner(e3(u), e3(u)) - (2.0 * u * u + 1.0)).abs() < 1e-12);
            assert!(inner(e1(u), e3(u)).abs() < 1e-12);
            assert!(inner(e2(u), e3(u)).abs() < 1e-12);
        }
    }

    #[test]
    fn declared_curve_classes_match_computation() {
        for (id, class) in [
            ("ex3_1", CausalClass::Spacelike),
            ("ex4_1", CausalClass::Timelike),
            ("helicoid1", CausalClass::Timelike),
            ("helicoid2", CausalClass::Timelike),
            ("helicoid3", CausalClass::Spacelike),
        ] {
            let p = get_preset(id).unwrap();
            let mid = 0.5 * (p.family.u_domain.0 + p.family.u_domain.1);
            let f = frenet_at(&p.family.curve, mid, 1e-9).unwrap();
            assert_eq!(f.curve_class, class, "{id}");
            assert_eq!(p.claims.curve_class, class, "{id}");
        }
    }

    #[test]
    fn minimality_claims() {
        for id in ["helicoid1", "helicoid2", "helicoid3", "enneper2"] {
            assert!(get_preset(id).unwrap().claims.minimal, "{id}");
        }
        assert!(!get_preset("cylinder").unwrap().claims.minimal);
    }
}
