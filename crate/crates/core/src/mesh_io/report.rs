//! Tabular outputs: the per-sample frame table and the invariants report.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{FrameError, FrameField};
use crate::invariants::base_curve_invariants;
use crate::real::Real;
use crate::ruled::{ClassificationReport, RuledSurface};
use crate::vec3::Vec3;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown format {0:?} (expected csv or json)")]
pub struct UnknownFormat(pub String);

impl FromStr for Format {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(UnknownFormat(s.into())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

pub const FRAME_COLUMNS: [&str; 22] = [
    "s", "x", "y", "z", "T_x", "T_y", "T_z", "N_x", "N_y", "N_z", "B_x", "B_y", "B_z", "kappa", "tau", "theta", "U_x",
    "U_y", "U_z", "V_x", "V_y", "V_z",
];

/// One row of the frame table. `N`, `B`, `τ` and `θ` are absent where the curvature vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameRow<T> {
    pub s: T,
    pub position: Vec3<T>,
    #[serde(rename = "T")]
    pub tangent: Vec3<T>,
    #[serde(rename = "N")]
    pub normal: Option<Vec3<T>>,
    #[serde(rename = "B")]
    pub binormal: Option<Vec3<T>>,
    pub kappa: T,
    pub tau: Option<T>,
    pub theta: Option<T>,
    #[serde(rename = "U")]
    pub u: Vec3<T>,
    #[serde(rename = "V")]
    pub v: Vec3<T>,
}

pub fn frame_rows<T: Real>(field: &FrameField<T>, grid: &[T]) -> Result<Vec<FrameRow<T>>, FrameError> {
    grid.par_iter()
        .map(|&s| {
            let f = field.at(s)?;
            Ok(FrameRow {
                s,
                position: f.position,
                tangent: f.tangent,
                normal: f.frenet.map(|fd| fd.normal),
                binormal: f.frenet.map(|fd| fd.binormal),
                kappa: f.kappa,
                tau: f.tau(),
                theta: f.theta,
                u: f.u,
                v: f.v,
            })
        })
        .collect()
}

pub const REPORT_COLUMNS: [&str; 15] = [
    "s",
    "kappa",
    "tau",
    "theta",
    "x1",
    "x2",
    "x3",
    "P",
    "k_g",
    "k_n",
    "tau_g_paper",
    "rho_standard",
    "residual_T1",
    "residual_T2",
    "residual_T3",
];

/// Base-curve invariants at one sample; cells are empty where undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantRow<T> {
    pub s: T,
    pub kappa: Option<T>,
    pub tau: Option<T>,
    pub theta: Option<T>,
    pub x1: Option<T>,
    pub x2: Option<T>,
    pub x3: Option<T>,
    #[serde(rename = "P")]
    pub p: Option<T>,
    pub k_g: Option<T>,
    pub k_n: Option<T>,
    pub tau_g_paper: Option<T>,
    /// Closed-form `⟨N̄', N̄ × T⟩`, zero on a line of curvature.
    pub rho_standard: Option<T>,
    #[serde(rename = "residual_T1")]
    pub residual_t1: Option<T>,
    #[serde(rename = "residual_T2")]
    pub residual_t2: Option<T>,
    #[serde(rename = "residual_T3")]
    pub residual_t3: Option<T>,
}

impl<T: Real> InvariantRow<T> {
    fn cells(&self) -> [Option<T>; 15] {
        [
            Some(self.s),
            self.kappa,
            self.tau,
            self.theta,
            self.x1,
            self.x2,
            self.x3,
            self.p,
            self.k_g,
            self.k_n,
            self.tau_g_paper,
            self.rho_standard,
            self.residual_t1,
            self.residual_t2,
            self.residual_t3,
        ]
    }
}

pub fn invariant_rows<T: Real>(surface: &RuledSurface<T>, grid: &[T]) -> Vec<InvariantRow<T>> {
    grid.par_iter()
        .map(|&s| {
            let frame = surface.frame_at(s).ok();
            let x = surface.coefficients(s).ok().map(|c| c.value);
            let b = base_curve_invariants(surface, s).ok();
            InvariantRow {
                s,
                kappa: frame.map(|f| f.kappa),
                tau: frame.and_then(|f| f.tau()),
                theta: frame.and_then(|f| f.theta),
                x1: x.map(|x| x[0]),
                x2: x.map(|x| x[1]),
                x3: x.map(|x| x[2]),
                p: surface.distribution_parameter(s).ok().map(|p| p.value),
                k_g: b.map(|b| b.k_g),
                k_n: b.map(|b| b.k_n),
                tau_g_paper: b.map(|b| b.tau_g_paper),
                rho_standard: b.map(|b| b.rho_closed),
                residual_t1: b.map(|b| b.residual_t1),
                residual_t2: b.map(|b| b.residual_t2),
                residual_t3: b.map(|b| b.residual_t3),
            }
        })
        .collect()
}

/// Shortest round-trip text; exponent form outside `[1e-4, 1e16)`, and `-0` printed as `0`.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn cell<T: Real>(x: Option<T>) -> String {
    x.map(|x| format_real(x.as_f64())).unwrap_or_default()
}

fn csv_table<I>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    // writing into memory cannot fail
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(&r).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

fn json_document(value: &impl Serialize) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report types serialize");
    out.push(b'\n');
    out
}

#[derive(Serialize)]
struct FramesDocument<'a, T> {
    schema_version: u32,
    frames: &'a [FrameRow<T>],
}

pub fn write_frames<T: Real>(rows: &[FrameRow<T>], format: Format) -> Vec<u8> {
    match format {
        Format::Json => json_document(&FramesDocument {
            schema_version: SCHEMA_VERSION,
            frames: rows,
        }),
        Format::Csv => csv_table(
            &FRAME_COLUMNS,
            rows.iter().map(|r| {
                let v = |p: Vec3<T>| p.to_array().map(Some);
                let o = |p: Option<Vec3<T>>| p.map_or([None; 3], v);
                let mut c = vec![Some(r.s)];
                c.extend(v(r.position));
                c.extend(v(r.tangent));
                c.extend(o(r.normal));
                c.extend(o(r.binormal));
                c.extend([Some(r.kappa), r.tau, r.theta]);
                c.extend(v(r.u));
                c.extend(v(r.v));
                c.into_iter().map(cell).collect()
            }),
        ),
    }
}

#[derive(Serialize)]
struct ReportDocument<'a, T> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a ClassificationReport<T>,
    samples: &'a [InvariantRow<T>],
}

/// CSV carries the per-sample invariants table; JSON carries the full
/// classification with the same table under `samples`.
pub fn write_report<T: Real>(report: &ClassificationReport<T>, rows: &[InvariantRow<T>], format: Format) -> Vec<u8> {
    match format {
        Format::Json => json_document(&ReportDocument {
            schema_version: SCHEMA_VERSION,
            report,
            samples: rows,
        }),
        Format::Csv => csv_table(&REPORT_COLUMNS, rows.iter().map(|r| r.cells().into_iter().map(cell).collect())),
    }
}

/// CSV rendering of the invariants table alone.
pub fn write_invariants_csv<T: Real>(rows: &[InvariantRow<T>]) -> Vec<u8> {
    csv_table(&REPORT_COLUMNS, rows.iter().map(|r| r.cells().into_iter().map(cell).collect()))
}
