//! Ruled surfaces whose rulings are fixed in a rotation-minimizing (or general
//! adapted) frame along a base curve.
//!
//! The kernel is generic over the scalar type ([`Real`]: `f32` or `f64`);
//! the `f64` aliases at the crate root are what the command-line tool uses.

// `!(x > eps)` is used on purpose: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod expr;
pub mod frame;
pub mod invariants;
pub mod mesh_io;
pub mod real;
pub mod ruled;
pub mod vec3;

pub use curve::{CurveDef, CurveError, FrenetData};
pub use expr::{parse, Expr, Jet3};
pub use mesh_io::{tessellate, Format, Mesh};
pub use frame::{AdaptedFrame, FrameField, FrameOptions, FrameSample, ThetaPolicy};
pub use real::{Real, EPS_REG, FD_STEP};
pub use ruled::{DirectorField, RuledError, RuledSurface, RuledSurfaceDef, Tolerances};
pub use vec3::Vec3;

pub type Vector3 = Vec3<f64>;
pub type Jet = Jet3<f64>;
pub type Curve = CurveDef<f64>;
pub type Frenet = FrenetData<f64>;
pub type Frame = AdaptedFrame<f64>;
pub type Policy = ThetaPolicy<f64>;
pub type Surface = RuledSurface<f64>;
pub type SurfaceDef = RuledSurfaceDef<f64>;
