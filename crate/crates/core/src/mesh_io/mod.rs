//! Triangle meshes of ruled surfaces, and the text formats the tool emits.

mod obj;
mod report;

use rayon::prelude::*;
use thiserror::Error;

pub use obj::{format_g, read_obj, write_obj, ObjError};
pub use report::{
    format_real, frame_rows, invariant_rows, write_frames, write_report, Format, FrameRow, InvariantRow, UnknownFormat,
    write_invariants_csv, FRAME_COLUMNS, REPORT_COLUMNS, SCHEMA_VERSION,
};

use crate::curve::uniform_grid;
use crate::real::Real;
use crate::ruled::{RuledError, RuledSurface};
use crate::vec3::Vec3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("a grid needs at least 2 samples per direction, got {n_s} x {n_v}")]
    GridTooSmall { n_s: usize, n_v: usize },
    #[error(transparent)]
    Surface(#[from] RuledError),
}

/// Indexed triangle mesh. Grid meshes store vertex `(i_s, j_v)` at `i_s * n_v + j_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    pub vertices: Vec<Vec3<T>>,
    /// Parallel to `vertices`; `None` at singular samples.
    pub normals: Vec<Option<Vec3<T>>>,
    pub faces: Vec<[usize; 3]>,
    /// Set when some normal is missing; such meshes are written without normals.
    pub flat_shaded: bool,
}

impl<T: Real> Mesh<T> {
    pub fn triangle_count(&self) -> usize {
        self.faces.len()
    }

    /// Checks index bounds and the normal-presence rule.
    pub fn is_valid(&self) -> bool {
        let n = self.vertices.len();
        self.normals.len() == n
            && self.faces.iter().all(|f| {
                f.iter()
                    .all(|&i| i < n && (self.flat_shaded || self.normals[i].is_some()))
            })
    }
}

/// Samples `surface` on a uniform `n_s × n_v` grid over its parameter rectangle
/// and splits every quad along its shorter diagonal.
pub fn tessellate<T: Real>(surface: &RuledSurface<T>, n_s: usize, n_v: usize) -> Result<Mesh<T>, MeshError> {
    if n_s < 2 || n_v < 2 {
        return Err(MeshError::GridTooSmall { n_s, n_v });
    }
    let def = surface.def();
    let ss = surface.curve().uniform_grid(n_s);
    let vs = uniform_grid(def.v_min, def.v_max, n_v);

    let samples: Vec<(Vec3<T>, Option<Vec3<T>>)> = ss
        .par_iter()
        .flat_map_iter(|&s| vs.iter().map(move |&v| (s, v)))
        .map(|(s, v)| Ok((surface.surface_point(s, v)?, surface.surface_normal(s, v).ok())))
        .collect::<Result<_, RuledError>>()?;
    let (vertices, normals): (Vec<_>, Vec<_>) = samples.into_iter().unzip();

    let at = |i: usize, j: usize| i * n_v + j;
    let mut faces = Vec::with_capacity(2 * (n_s - 1) * (n_v - 1));
    for i in 0..n_s - 1 {
        for j in 0..n_v - 1 {
            let (a, b, c, d) = (at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
            // (s, v) counterclockwise, so faces follow φ_s × φ_v
            let ac = (vertices[c] - vertices[a]).norm_squared();
            let bd = (vertices[d] - vertices[b]).norm_squared();
            if ac <= bd {
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            } else {
                faces.push([a, b, d]);
                faces.push([b, c, d]);
            }
        }
    }
    let flat_shaded = normals.iter().any(Option::is_none);
    Ok(Mesh {
        vertices,
        normals,
        faces,
        flat_shaded,
    })
}
