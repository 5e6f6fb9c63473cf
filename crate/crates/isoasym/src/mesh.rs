//! Tessellation and OBJ serialization. Output is deterministic; floats
//! use the shortest decimal that round-trips, so parse-then-write is a
//! byte-level fixed point.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::mlinalg::MVec3;
use crate::surface::{evaluate_surface, SurfaceError, SurfaceFamily};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("evaluation failed at grid ({i}, {j}): {source}")]
    Eval {
        i: usize,
        j: usize,
        #[source]
        source: SurfaceError,
    },
    #[error("obj parse error at line {line}: {message}")]
    ObjParse { line: usize, message: String },
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Triangle mesh over the parameter rectangle. Vertex (i, j) sits at
/// index `i * nv + j`; the embedded spine row is kept as a polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<MVec3>,
    pub faces: Vec<[usize; 3]>,
    pub curve_polyline: Option<Vec<usize>>,
}

pub fn tessellate(s: &SurfaceFamily, nu: usize, nv: usize) -> Result<TriangleMesh, MeshError> {
    assert!(nu >= 2 && nv >= 2);
    let (l1, l2) = s.u_domain;
    let (t1, t2) = s.v_domain;
    let mut vertices = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = l1 + (l2 - l1) * i as f64 / (nu - 1) as f64;
        for j in 0..nv {
            let v = t1 + (t2 - t1) * j as f64 / (nv - 1) as f64;
            vertices.push(evaluate_surface(s, u, v).map_err(|source| MeshError::Eval { i, j, source })?);
        }
    }
    let mut faces = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let a = i * nv + j;
            let b = a + 1;
            let c = (i + 1) * nv + j;
            let d = c + 1;
            faces.push([a, c, d]);
            faces.push([a, d, b]);
        }
    }
    // row nearest v0 carries the common curve
    let v0 = s.v0();
    let j0 = (0..nv)
        .min_by(|&a, &b| {
            let va = t1 + (t2 - t1) * a as f64 / (nv - 1) as f64;
            let vb = t1 + (t2 - t1) * b as f64 / (nv - 1) as f64;
            (va - v0).abs().partial_cmp(&(vb - v0).abs()).unwrap()
        })
        .unwrap();
    let polyline = (0..nu).map(|i| i * nv + j0).collect();
    Ok(TriangleMesh { vertices, faces, curve_polyline: Some(polyline) })
}

/// Serialize to OBJ text: "v" lines, "l" polyline (when present), then
/// "f" lines, all 1-based, LF-terminated.
pub fn obj_string(m: &TriangleMesh) -> String {
    let mut out = String::new();
    for v in &m.vertices {
        writeln!(out, "v {} {} {}", v.x1, v.x2, v.x3).unwrap();
    }
    if let Some(poly) = &m.curve_polyline {
        if !poly.is_empty() {
            out.push('l');
            for &i in poly {
                write!(out, " {}", i + 1).unwrap();
            }
            out.push('\n');
        }
    }
    for f in &m.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
    }
    out
}

pub fn write_obj(m: &TriangleMesh, path: &Path) -> Result<(), MeshError> {
    std::fs::write(path, obj_string(m)).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parse the subset of OBJ emitted by [`obj_string`] (v / l / f lines,
/// comments and blanks tolerated).
pub fn parse_obj(text: &str) -> Result<TriangleMesh, MeshError> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    let mut polyline: Option<Vec<usize>> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut parts = l.split_whitespace();
        let tag = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        let parse_f = |s: &str| {
            s.parse::<f64>().map_err(|e| MeshError::ObjParse { line, message: e.to_string() })
        };
        let parse_i = |s: &str| -> Result<usize, MeshError> {
            let k: i64 = s
                .parse()
                .map_err(|e: std::num::ParseIntError| MeshError::ObjParse { line, message: e.to_string() })?;
            if k < 1 {
                return Err(MeshError::ObjParse { line, message: format!("index {k} < 1") });
            }
            Ok((k - 1) as usize)
        };
        match tag {
            "v" => {
                if rest.len() != 3 {
                    return Err(MeshError::ObjParse { line, message: "v needs 3 coordinates".into() });
                }
                vertices.push(MVec3::new(parse_f(rest[0])?, parse_f(rest[1])?, parse_f(rest[2])?));
            }
            "f" => {
                if rest.len() != 3 {
                    return Err(MeshError::ObjParse { line, message: "f needs 3 indices".into() });
                }
                faces.push([parse_i(rest[0])?, parse_i(rest[1])?, parse_i(rest[2])?]);
            }
            "l" => {
                let idx: Result<Vec<usize>, _> = rest.iter().map(|s| parse_i(s)).collect();
                polyline = Some(idx?);
            }
            other => {
                return Err(MeshError::ObjParse { line, message: format!("unsupported tag '{other}'") });
            }
        }
    }
    Ok(TriangleMesh { vertices, faces, curve_polyline: polyline })
}
