//! Wavefront OBJ subset: `v`, `vn` and triangular `f` records.

use std::fmt::Write as _;

use thiserror::Error;

use super::Mesh;
use crate::real::Real;
use crate::vec3::Vec3;

const DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ObjError {
    pub line: usize,
    pub message: String,
}

/// `printf("%.<digits>g")`, with negative zero printed as `0`.
pub fn format_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn push_triple<T: Real>(out: &mut String, tag: &str, p: Vec3<T>) {
    let [x, y, z] = p.to_array().map(|c| format_g(c.as_f64(), DIGITS));
    let _ = writeln!(out, "{tag} {x} {y} {z}");
}

/// Serializes `m`. Smooth meshes get `vn` records and `f a//a b//b c//c`
/// faces; flat-shaded meshes get plain `f a b c`.
pub fn write_obj<T: Real>(m: &Mesh<T>) -> Vec<u8> {
    let mut out = String::with_capacity(48 * (m.vertices.len() * 2 + m.faces.len()));
    for &p in &m.vertices {
        push_triple(&mut out, "v", p);
    }
    let smooth = !m.flat_shaded && m.normals.iter().all(Option::is_some);
    if smooth {
        for n in m.normals.iter().flatten() {
            push_triple(&mut out, "vn", *n);
        }
    }
    for f in &m.faces {
        let [a, b, c] = f.map(|i| i + 1);
        if smooth {
            let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
        } else {
            let _ = writeln!(out, "f {a} {b} {c}");
        }
    }
    out.into_bytes()
}

fn parse_triple(line: usize, fields: &[&str]) -> Result<Vec3<f64>, ObjError> {
    let err = |message: String| ObjError { line, message };
    if fields.len() != 3 {
        return Err(err(format!("expected 3 coordinates, found {}", fields.len())));
    }
    let mut c = [0.0; 3];
    for (slot, f) in c.iter_mut().zip(fields) {
        *slot = f.parse().map_err(|_| err(format!("bad number {f:?}")))?;
    }
    Ok(Vec3::new(c[0], c[1], c[2]))
}

/// Reads what [`write_obj`] produces. Comments and blank lines are skipped.
pub fn read_obj(text: &str) -> Result<Mesh<f64>, ObjError> {
    let mut vertices = Vec::new();
    let mut normals = Vec::new();
    let mut faces = Vec::new();
    let mut with_normals = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |message: String| ObjError { line, message };
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let Some((&tag, rest)) = fields.split_first() else {
            continue;
        };
        match tag {
            "v" => vertices.push(parse_triple(line, rest)?),
            "vn" => normals.push(parse_triple(line, rest)?),
            "f" => {
                if rest.len() != 3 {
                    return Err(err(format!("only triangles are supported, found {} corners", rest.len())));
                }
                let mut face = [0usize; 3];
                for (slot, corner) in face.iter_mut().zip(rest) {
                    let (v, n) = match corner.split_once("//") {
                        Some((v, n)) => (v, Some(n)),
                        None => (*corner, None),
                    };
                    if *with_normals.get_or_insert(n.is_some()) != n.is_some() {
                        return Err(err("mixed face formats".into()));
                    }
                    let i: usize = v.parse().map_err(|_| err(format!("bad index {corner:?}")))?;
                    if n.is_some_and(|n| n != v) {
                        return Err(err(format!("normal index differs from vertex index in {corner:?}")));
                    }
                    if i == 0 || i > vertices.len() {
                        return Err(err(format!("index {i} out of range")));
                    }
                    *slot = i - 1;
                }
                faces.push(face);
            }
            t if t.starts_with('#') => {}
            other => return Err(err(format!("unsupported record {other:?}"))),
        }
    }
    let smooth = with_normals.unwrap_or(!normals.is_empty());
    let normals = if smooth {
        if normals.len() != vertices.len() {
            return Err(ObjError {
                line: 0,
                message: format!("{} normals for {} vertices", normals.len(), vertices.len()),
            });
        }
        normals.into_iter().map(Some).collect()
    } else {
        vec![None; vertices.len()]
    };
    Ok(Mesh {
        vertices,
        normals,
        faces,
        flat_shaded: !smooth,
    })
}
