//! Ruled surfaces `φ(s, v) = r(s) + v X(s)` with the director
//! `X = x1 T + x2 U + x3 V` fixed in an adapted frame.
//!
//! Primes on frame quantities are per unit arc length. The surface parameter
//! `s` is the curve's own parameter, so partials in `s` carry a factor `|r'|`.
//! `X` is used as given, not normalized.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{uniform_grid, CurveDef, CurveError, FrenetData};
use crate::expr::{parse, DomainError, Expr, Jet3, ParseError};
use crate::frame::{frame_angular_velocity, AdaptedFrame, FrameError, FrameField, FrameOptions, FrameSample, ThetaPolicy};
use crate::invariants::{theorem_report, TheoremSummary};
use crate::real::{eps_reg, max_abs, Real, FD_STEP};
use crate::vec3::Vec3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuledError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("director coefficient {which}: {source}")]
    Parse {
        which: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("ruling parameter range [{min}, {max}] is empty")]
    EmptyVRange { min: f64, max: f64 },
    #[error("ruling parameter {v} outside [{min}, {max}]")]
    VOutOfRange { v: f64, min: f64, max: f64 },
    #[error("director vanishes at s = {s}")]
    ZeroDirector { s: f64 },
    #[error("closed-form director derivative assumes a rotation-minimizing frame (φ = {phi:e} at s = {s})")]
    NotRotationMinimizing { s: f64, phi: f64 },
    #[error("Frenet frame undefined at s = {s}")]
    NoFrenetFrame { s: f64 },
    #[error("director derivative vanishes at s = {s}: cylindrical point, distribution parameter undefined")]
    CylindricalPoint { s: f64 },
    #[error("surface is singular at (s, v) = ({s}, {v})")]
    SingularPoint { s: f64, v: f64 },
    #[error("ruling is tangent to the base curve at s = {s} (x2 = x3 = 0)")]
    TangentRuling { s: f64 },
}

impl From<CurveError> for RuledError {
    fn from(e: CurveError) -> Self {
        RuledError::Frame(FrameError::Curve(e))
    }
}

/// Director coefficients `(x1, x2, x3)` in the adapted frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectorField {
    pub x1: Expr,
    pub x2: Expr,
    pub x3: Expr,
}

impl DirectorField {
    pub fn new(x1: Expr, x2: Expr, x3: Expr) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn parse(x1: &str, x2: &str, x3: &str) -> Result<Self, RuledError> {
        let p = |which, src| parse(src).map_err(|source| RuledError::Parse { which, source });
        Ok(Self::new(p("x1", x1)?, p("x2", x2)?, p("x3", x3)?))
    }

    pub fn eval_jets<T: Real>(&self, s: T) -> Result<[Jet3<T>; 3], DomainError> {
        Ok([self.x1.eval_jet(s)?, self.x2.eval_jet(s)?, self.x3.eval_jet(s)?])
    }

    pub fn coefficients<T: Real>(&self, s: T, speed: T) -> Result<DirectorCoefficients<T>, DomainError> {
        Ok(DirectorCoefficients::from_jets(self.eval_jets(s)?, speed))
    }
}

/// Coefficient values and their arc-length derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectorCoefficients<T> {
    pub value: [T; 3],
    pub arc_derivative: [T; 3],
}

impl<T: Real> DirectorCoefficients<T> {
    pub fn from_jets(j: [Jet3<T>; 3], speed: T) -> Self {
        Self {
            value: [j[0].value, j[1].value, j[2].value],
            arc_derivative: [j[0].d1 / speed, j[1].d1 / speed, j[2].d1 / speed],
        }
    }

    /// `x2² + x3²`, the squared length of the director's normal-plane part.
    pub fn normal_part_sq(&self) -> T {
        self.value[1] * self.value[1] + self.value[2] * self.value[2]
    }

    /// `x2 x3' - x3 x2'`.
    pub fn normal_wronskian(&self) -> T {
        self.value[1] * self.arc_derivative[2] - self.value[2] * self.arc_derivative[1]
    }
}

/// The surface definition as supplied by the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct RuledSurfaceDef<T> {
    pub curve: CurveDef<T>,
    pub theta: ThetaPolicy<T>,
    pub director: DirectorField,
    pub v_min: T,
    pub v_max: T,
}

impl<T: Real> RuledSurfaceDef<T> {
    pub fn new(
        curve: CurveDef<T>,
        theta: ThetaPolicy<T>,
        director: DirectorField,
        v_min: T,
        v_max: T,
    ) -> Result<Self, RuledError> {
        if !(v_min < v_max) {
            return Err(RuledError::EmptyVRange {
                min: v_min.as_f64(),
                max: v_max.as_f64(),
            });
        }
        Ok(Self {
            curve,
            theta,
            director,
            v_min,
            v_max,
        })
    }
}

/// `X = x1 T + x2 U + x3 V`.
pub fn director<T: Real>(d: &DirectorField, af: &AdaptedFrame<T>, s: T) -> Result<Vec3<T>, RuledError> {
    let [x1, x2, x3] = d.eval_jets(s)?;
    let x = af.tangent * x1.value + af.u * x2.value + af.v * x3.value;
    if !(x.norm() > eps_reg()) {
        return Err(RuledError::ZeroDirector { s: s.as_f64() });
    }
    Ok(x)
}

/// `X'` in `(T, U, V)` components for an RMF:
/// `(x1' - κ x2 cos θ + κ x3 sin θ, κ x1 cos θ + x2', x3' - κ x1 sin θ)`.
pub fn closed_director_derivative<T: Real>(c: &DirectorCoefficients<T>, kappa: T, theta: T) -> [T; 3] {
    let [x1, x2, x3] = c.value;
    let [d1, d2, d3] = c.arc_derivative;
    let (sn, cs) = theta.sin_cos();
    [
        d1 - kappa * x2 * cs + kappa * x3 * sn,
        kappa * x1 * cs + d2,
        d3 - kappa * x1 * sn,
    ]
}

/// `(x2 x3' - x3 x2') - κ x1 (x2 sin θ + x3 cos θ)`, equal to `det(T, X, X')` for an RMF.
pub fn closed_drall_numerator<T: Real>(c: &DirectorCoefficients<T>, kappa: T, theta: T) -> T {
    let [x1, x2, x3] = c.value;
    let (sn, cs) = theta.sin_cos();
    c.normal_wronskian() - kappa * x1 * (x2 * sn + x3 * cs)
}

fn ratio<T: Real>(num: T, den: T) -> Option<T> {
    (den > eps_reg::<T>() * eps_reg::<T>()).then(|| num / den)
}

/// Distribution parameter for `X ∈ span{T, U}` under an RMF.
pub fn drall_span_tu<T: Real>(c: &DirectorCoefficients<T>, kappa: T, theta: T) -> Option<T> {
    let [x1, x2, _] = c.value;
    let [d1, d2, _] = c.arc_derivative;
    let (sn, cs) = theta.sin_cos();
    let a = d1 - kappa * x2 * cs;
    let b = d2 + kappa * x1 * cs;
    let g = kappa * x1 * sn;
    ratio(-kappa * x1 * x2 * sn, a * a + b * b + g * g)
}

/// Distribution parameter for `X ∈ span{T, V}` under an RMF.
pub fn drall_span_tv<T: Real>(c: &DirectorCoefficients<T>, kappa: T, theta: T) -> Option<T> {
    let [x1, _, x3] = c.value;
    let [d1, _, d3] = c.arc_derivative;
    let (sn, cs) = theta.sin_cos();
    let a = d1 + kappa * x3 * sn;
    let b = kappa * x1 * cs;
    let g = d3 - kappa * x1 * sn;
    ratio(-kappa * x1 * x3 * cs, a * a + b * b + g * g)
}

/// Distribution parameter for `X ∈ span{U, V}` under an RMF.
pub fn drall_span_uv<T: Real>(c: &DirectorCoefficients<T>, kappa: T, theta: T) -> Option<T> {
    let [_, x2, x3] = c.value;
    let [_, d2, d3] = c.arc_derivative;
    let (sn, cs) = theta.sin_cos();
    let a = kappa * x3 * sn - kappa * x2 * cs;
    ratio(c.normal_wronskian(), a * a + d2 * d2 + d3 * d3)
}

/// Closed-form `X'` (frame components) with the RMF precondition checked.
pub fn director_derivative_closed<T: Real>(
    d: &DirectorField,
    fd: &FrenetData<T>,
    af: &AdaptedFrame<T>,
    s: T,
) -> Result<[T; 3], RuledError> {
    let phi = frame_angular_velocity(fd, af);
    if phi.abs() > rmf_phi_tolerance(fd.tau) {
        return Err(RuledError::NotRotationMinimizing {
            s: s.as_f64(),
            phi: phi.as_f64(),
        });
    }
    let c = d.coefficients(s, fd.speed)?;
    Ok(closed_director_derivative(&c, fd.kappa, af.theta))
}

fn rmf_phi_tolerance<T: Real>(tau: T) -> T {
    T::lit(1e-9) * T::one().max(tau.abs())
}

/// Director and its derivative at one base-curve point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RulingData<T> {
    pub frame: FrameSample<T>,
    pub coefficients: DirectorCoefficients<T>,
    pub director: Vec3<T>,
    /// `dX/ds` per unit arc length, world coordinates.
    pub director_derivative: Vec3<T>,
}

impl<T: Real> RulingData<T> {
    /// `det(T, X, X')`, evaluated as `(T × X) · X'` so that `X = T` gives exactly zero.
    pub fn drall_determinant(&self) -> T {
        self.frame.tangent.cross(self.director).dot(self.director_derivative)
    }
}

/// Distribution parameter `P = det(T, X, X') / |X'|²` and its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionParameter<T> {
    pub value: T,
    pub numerator: T,
    pub derivative_norm_sq: T,
}

/// First and second fundamental forms with Gaussian and mean curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct FundamentalForms<T> {
    pub E: T,
    pub F: T,
    pub G: T,
    pub e: T,
    pub f: T,
    pub g: T,
    pub K: T,
    pub H: T,
}

/// Pointwise surface data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceSample<T> {
    pub s: T,
    pub v: T,
    pub point: Vec3<T>,
    /// `∂φ/∂s` in the curve parameter.
    pub d_s: Vec3<T>,
    pub d_v: Vec3<T>,
    pub normal: Option<Vec3<T>>,
    pub forms: Option<FundamentalForms<T>>,
    #[serde(rename = "P")]
    pub p: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances<T> {
    /// Threshold on `|det(r', X, X')|` for a developable verdict.
    pub tol_dev: T,
    /// Closed-form residuals.
    pub tol_inv: T,
    /// Checks backed by finite differences.
    pub tol_fd: T,
    /// Gaussian curvature cross-check.
    pub tol_k: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            tol_dev: T::lit(1e-7),
            tol_inv: T::lit(1e-9),
            tol_fd: T::lit(1e-5),
            tol_k: T::lit(1e-5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Borderline,
}

impl Verdict {
    /// `yes` below `tol`, `no` above `10 tol`, `borderline` in between.
    pub fn from_residual<T: Real>(max_residual: T, tol: T) -> Self {
        if max_residual < tol {
            Verdict::Yes
        } else if max_residual > T::lit(10.0) * tol {
            Verdict::No
        } else {
            Verdict::Borderline
        }
    }
}

/// Which frame axes the director spans on the sampled grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    AlongT,
    AlongU,
    AlongV,
    SpanTU,
    SpanTV,
    SpanUV,
    General,
}

impl SpecialCase {
    /// Classifies from which coefficients vanish identically.
    pub fn from_vanishing(zero: [bool; 3]) -> Self {
        match zero {
            [false, true, true] => SpecialCase::AlongT,
            [true, false, true] => SpecialCase::AlongU,
            [true, true, false] => SpecialCase::AlongV,
            [false, false, true] => SpecialCase::SpanTU,
            [false, true, false] => SpecialCase::SpanTV,
            [true, false, false] => SpecialCase::SpanUV,
            _ => SpecialCase::General,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DevelopabilityReport<T> {
    pub verdict: Verdict,
    pub max_abs_det: T,
    pub tol_dev: T,
    pub samples: usize,
    /// Parameters where `X' = 0`; `det` is zero there and `P` undefined.
    pub cylindrical_points: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryCheck<T> {
    pub corollary: u8,
    pub condition: &'static str,
    pub max_residual: T,
    pub satisfied: bool,
    /// The closed form was derived for the RMF; under another policy it is
    /// reported but the numeric determinant governs the verdict.
    pub closed_form_valid: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureCrossCheck<T> {
    pub max_abs_k: T,
    pub samples: usize,
    pub skipped_singular: usize,
    pub tol_k: T,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport<T> {
    pub policy: &'static str,
    pub n_s: usize,
    pub n_v: usize,
    pub director_normalized: bool,
    pub developable: DevelopabilityReport<T>,
    pub special_case: SpecialCase,
    pub corollaries: Vec<CorollaryCheck<T>>,
    pub curvature_check: CurvatureCrossCheck<T>,
    pub base_curve: TheoremSummary<T>,
}

/// A [`RuledSurfaceDef`] bound to its frame field; all evaluation goes through here.
#[derive(Debug, Clone)]
pub struct RuledSurface<T> {
    def: RuledSurfaceDef<T>,
    frames: FrameField<T>,
}

impl<T: Real> RuledSurface<T> {
    pub fn new(def: RuledSurfaceDef<T>, options: FrameOptions) -> Result<Self, RuledError> {
        let frames = FrameField::new(def.curve.clone(), def.theta.clone(), options)?;
        Ok(Self { def, frames })
    }

    pub fn def(&self) -> &RuledSurfaceDef<T> {
        &self.def
    }

    pub fn frames(&self) -> &FrameField<T> {
        &self.frames
    }

    pub fn curve(&self) -> &CurveDef<T> {
        &self.def.curve
    }

    pub fn is_rmf(&self) -> bool {
        self.def.theta.is_rmf()
    }

    pub fn frame_at(&self, s: T) -> Result<FrameSample<T>, RuledError> {
        Ok(self.frames.at(s)?)
    }

    pub fn coefficients(&self, s: T) -> Result<DirectorCoefficients<T>, RuledError> {
        let f = self.frames.at(s)?;
        Ok(self.def.director.coefficients(s, f.speed)?)
    }

    /// Director and `X' = Σ (x_i' e_i + x_i e_i')` using the general frame derivative rules.
    pub fn ruling(&self, s: T) -> Result<RulingData<T>, RuledError> {
        let frame = self.frames.at(s)?;
        let coefficients = self.def.director.coefficients(s, frame.speed)?;
        let d = frame.derivatives();
        let [x1, x2, x3] = coefficients.value;
        let director = frame.from_frame(coefficients.value);
        let director_derivative = frame.from_frame(coefficients.arc_derivative) + d.tangent * x1 + d.u * x2 + d.v * x3;
        Ok(RulingData {
            frame,
            coefficients,
            director,
            director_derivative,
        })
    }

    /// `X(s)`, failing where the director vanishes.
    pub fn director(&self, s: T) -> Result<Vec3<T>, RuledError> {
        let x = self.ruling(s)?.director;
        if !(x.norm() > eps_reg()) {
            return Err(RuledError::ZeroDirector { s: s.as_f64() });
        }
        Ok(x)
    }

    /// Closed-form `X'` in frame components; refused unless the frame is rotation-minimizing.
    pub fn director_derivative_closed(&self, s: T) -> Result<[T; 3], RuledError> {
        let r = self.ruling(s)?;
        let f = &r.frame;
        if f.phi.abs() > rmf_phi_tolerance(f.tau().unwrap_or_else(T::zero)) {
            return Err(RuledError::NotRotationMinimizing {
                s: s.as_f64(),
                phi: f.phi.as_f64(),
            });
        }
        Ok(closed_director_derivative(&r.coefficients, f.kappa, f.theta_or_zero()))
    }

    /// `X'` in world coordinates, valid under any θ policy.
    pub fn director_derivative_numeric(&self, s: T) -> Result<Vec3<T>, RuledError> {
        Ok(self.ruling(s)?.director_derivative)
    }

    pub fn drall_determinant(&self, s: T) -> Result<T, RuledError> {
        Ok(self.ruling(s)?.drall_determinant())
    }

    /// Closed-form numerator of `P`, meaningful for the RMF policy.
    pub fn closed_drall_numerator(&self, s: T) -> Result<T, RuledError> {
        let r = self.ruling(s)?;
        Ok(closed_drall_numerator(&r.coefficients, r.frame.kappa, r.frame.theta_or_zero()))
    }

    pub fn distribution_parameter(&self, s: T) -> Result<DistributionParameter<T>, RuledError> {
        let r = self.ruling(s)?;
        let numerator = r.drall_determinant();
        let derivative_norm_sq = r.director_derivative.norm_squared();
        if !(derivative_norm_sq.sqrt() > eps_reg()) {
            return Err(RuledError::CylindricalPoint { s: s.as_f64() });
        }
        Ok(DistributionParameter {
            value: numerator / derivative_norm_sq,
            numerator,
            derivative_norm_sq,
        })
    }

    fn point_unchecked(&self, s: T, v: T) -> Result<Vec3<T>, RuledError> {
        let f = self.frames.at(s)?;
        let c = self.def.director.eval_jets(s)?;
        Ok(f.position + f.from_frame([c[0].value, c[1].value, c[2].value]) * v)
    }

    fn check_v(&self, v: T) -> Result<(), RuledError> {
        if v < self.def.v_min || v > self.def.v_max {
            return Err(RuledError::VOutOfRange {
                v: v.as_f64(),
                min: self.def.v_min.as_f64(),
                max: self.def.v_max.as_f64(),
            });
        }
        Ok(())
    }

    /// `φ(s, v) = r(s) + v X(s)`.
    pub fn surface_point(&self, s: T, v: T) -> Result<Vec3<T>, RuledError> {
        self.check_v(v)?;
        self.point_unchecked(s, v)
    }

    /// `(∂φ/∂s, ∂φ/∂v)` with `s` the curve parameter.
    pub fn partials(&self, s: T, v: T) -> Result<(Vec3<T>, Vec3<T>), RuledError> {
        let r = self.ruling(s)?;
        let d_s = (r.frame.tangent + r.director_derivative * v) * r.frame.speed;
        Ok((d_s, r.director))
    }

    /// `φ_s × φ_v / |φ_s × φ_v|`.
    pub fn surface_normal(&self, s: T, v: T) -> Result<Vec3<T>, RuledError> {
        let r = self.ruling(s)?;
        // the positive factor |r'| does not change the direction
        let n = (r.frame.tangent + r.director_derivative * v).cross(r.director);
        if !(n.norm() > eps_reg()) {
            return Err(RuledError::SingularPoint {
                s: s.as_f64(),
                v: v.as_f64(),
            });
        }
        Ok(n / n.norm())
    }

    /// Normal along the base curve from the frame: `(x2 V - x3 U)/sqrt(x2² + x3²)`.
    pub fn base_normal_closed(&self, s: T) -> Result<Vec3<T>, RuledError> {
        let f = self.frames.at(s)?;
        let c = self.def.director.eval_jets(s)?;
        let (x2, x3) = (c[1].value, c[2].value);
        let n = (x2 * x2 + x3 * x3).sqrt();
        if !(n > eps_reg()) {
            return Err(RuledError::TangentRuling { s: s.as_f64() });
        }
        Ok((f.v * x2 - f.u * x3) / n)
    }

    /// Fundamental forms by central differences of `φ` (step `FD_STEP` in both parameters).
    pub fn fundamental_forms(&self, s: T, v: T) -> Result<FundamentalForms<T>, RuledError> {
        let h = T::lit(FD_STEP);
        let two = T::lit(2.0);
        let p = |ds: i32, dv: i32| self.point_unchecked(s + h * T::lit(f64::from(ds)), v + h * T::lit(f64::from(dv)));
        let c = p(0, 0)?;
        let (sp, sm, vp, vm) = (p(1, 0)?, p(-1, 0)?, p(0, 1)?, p(0, -1)?);
        let (pp, pm, mp, mm) = (p(1, 1)?, p(1, -1)?, p(-1, 1)?, p(-1, -1)?);
        let phi_s = (sp - sm) / (two * h);
        let phi_v = (vp - vm) / (two * h);
        let phi_ss = (sp - c * two + sm) / (h * h);
        let phi_vv = (vp - c * two + vm) / (h * h);
        let phi_sv = (pp - pm - mp + mm) / (T::lit(4.0) * h * h);
        let cross = phi_s.cross(phi_v);
        if !(cross.norm() > eps_reg()) {
            return Err(RuledError::SingularPoint {
                s: s.as_f64(),
                v: v.as_f64(),
            });
        }
        let n = cross / cross.norm();
        let (e_, f_, g_) = (phi_s.dot(phi_s), phi_s.dot(phi_v), phi_v.dot(phi_v));
        let (l, m, nn) = (phi_ss.dot(n), phi_sv.dot(n), phi_vv.dot(n));
        let w = e_ * g_ - f_ * f_;
        Ok(FundamentalForms {
            E: e_,
            F: f_,
            G: g_,
            e: l,
            f: m,
            g: nn,
            K: (l * nn - m * m) / w,
            H: (l * g_ - two * m * f_ + nn * e_) / (two * w),
        })
    }

    /// Everything at `(s, v)`; singular pieces are left empty.
    pub fn sample(&self, s: T, v: T) -> Result<SurfaceSample<T>, RuledError> {
        let (d_s, d_v) = self.partials(s, v)?;
        Ok(SurfaceSample {
            s,
            v,
            point: self.point_unchecked(s, v)?,
            d_s,
            d_v,
            normal: self.surface_normal(s, v).ok(),
            forms: self.fundamental_forms(s, v).ok(),
            p: self.distribution_parameter(s).ok().map(|p| p.value),
        })
    }

    /// Developability verdict, special-case detection with the corollary
    /// residuals, a Gaussian-curvature cross-check and the base-curve theorems.
    pub fn classify(&self, n_s: usize, n_v: usize, tol: &Tolerances<T>) -> Result<ClassificationReport<T>, RuledError> {
        let grid = self.def.curve.uniform_grid(n_s.max(2));
        let rulings: Vec<RulingData<T>> = grid.par_iter().map(|&s| self.ruling(s)).collect::<Result<_, _>>()?;

        let dets: Vec<T> = rulings.iter().map(RulingData::drall_determinant).collect();
        let max_abs_det = max_abs(dets.iter().copied());
        let cylindrical_points = rulings
            .iter()
            .filter(|r| !(r.director_derivative.norm() > eps_reg()))
            .map(|r| r.frame.t)
            .collect();
        let developable = DevelopabilityReport {
            verdict: Verdict::from_residual(max_abs_det, tol.tol_dev),
            max_abs_det,
            tol_dev: tol.tol_dev,
            samples: rulings.len(),
            cylindrical_points,
        };

        let vanishing: [bool; 3] =
            std::array::from_fn(|i| rulings.iter().all(|r| !(r.coefficients.value[i].abs() > eps_reg())));
        let special_case = SpecialCase::from_vanishing(vanishing);
        let corollaries = self.corollary_checks(special_case, &rulings, tol);

        let curvature_check = self.curvature_cross_check(&grid, n_v, developable.verdict, tol)?;
        let base_curve = theorem_report(self, &grid, tol).summary;

        Ok(ClassificationReport {
            policy: self.def.theta.name(),
            n_s: grid.len(),
            n_v,
            director_normalized: false,
            developable,
            special_case,
            corollaries,
            curvature_check,
            base_curve,
        })
    }

    fn corollary_checks(&self, case: SpecialCase, rulings: &[RulingData<T>], tol: &Tolerances<T>) -> Vec<CorollaryCheck<T>> {
        let rmf = self.is_rmf();
        let eps = eps_reg::<T>();
        let kappas = || rulings.iter().map(|r| r.frame.kappa);
        let thetas = || rulings.iter().map(|r| r.frame.theta_or_zero());
        let x = |i: usize| rulings.iter().map(move |r| r.coefficients.value[i]);
        let closed_note = |notes: &mut Vec<String>| {
            if !rmf {
                notes.push("closed form assumes the rotation-minimizing frame; the numeric determinant governs the verdict".into());
            }
        };
        let mut out = Vec::new();
        match case {
            SpecialCase::AlongT => {
                let max_p = max_abs(rulings.iter().map(|r| {
                    let d = r.director_derivative.norm_squared();
                    if d.sqrt() > eps {
                        r.drall_determinant() / d
                    } else {
                        T::zero()
                    }
                }));
                out.push(CorollaryCheck {
                    corollary: 6,
                    condition: "X = T: P = 0",
                    max_residual: max_p,
                    satisfied: max_p < tol.tol_dev,
                    closed_form_valid: true,
                    notes: vec![],
                });
            }
            SpecialCase::AlongU | SpecialCase::AlongV => {
                // P_U = φ/(κ² cos²θ + φ²), P_V = φ/(κ² sin²θ + φ²)
                let p_of = |phi: T, k: T, trig: T| {
                    let den = k * k * trig * trig + phi * phi;
                    if den > T::zero() {
                        phi / den
                    } else {
                        T::zero()
                    }
                };
                let diff = max_abs(rulings.iter().map(|r| {
                    let f = &r.frame;
                    let (sn, cs) = f.theta_or_zero().sin_cos();
                    p_of(f.phi, f.kappa, cs) - p_of(f.phi, f.kappa, sn)
                }));
                let max_phi = max_abs(rulings.iter().map(|r| r.frame.phi));
                out.push(CorollaryCheck {
                    corollary: 6,
                    condition: "X = U or X = V: P_U = P_V",
                    max_residual: diff,
                    satisfied: diff < tol.tol_dev,
                    closed_form_valid: true,
                    notes: vec![format!(
                        "frame angular velocity θ'/|r'| + τ: max |φ| = {max_phi:e}; both parameters vanish when φ = 0"
                    )],
                });
            }
            SpecialCase::SpanTU | SpecialCase::SpanTV => {
                let (corollary, condition, trig_is_sin, other) = if case == SpecialCase::SpanTU {
                    (7, "κ x1 x2 sin θ = 0", true, 1)
                } else {
                    (8, "κ x1 x3 cos θ = 0", false, 2)
                };
                let trig = |th: T| if trig_is_sin { th.sin() } else { th.cos() };
                let residual = max_abs(
                    rulings
                        .iter()
                        .map(|r| r.frame.kappa * r.coefficients.value[0] * r.coefficients.value[other] * trig(r.frame.theta_or_zero())),
                );
                let mut notes = Vec::new();
                if max_abs(kappas()) < eps {
                    notes.push("curvature vanishes identically".into());
                }
                if max_abs(x(0).zip(x(other)).map(|(a, b)| a * b)) < eps {
                    notes.push(format!("x1 x{} vanishes identically", other + 1));
                }
                if max_abs(thetas().map(trig)) < tol.tol_inv {
                    notes.push(if trig_is_sin {
                        "sin θ = 0 on the grid (θ = kπ)".into()
                    } else {
                        "cos θ = 0 on the grid (θ = π/2 + kπ)".into()
                    });
                }
                closed_note(&mut notes);
                out.push(CorollaryCheck {
                    corollary,
                    condition,
                    max_residual: residual,
                    satisfied: residual < tol.tol_dev,
                    closed_form_valid: rmf,
                    notes,
                });
            }
            SpecialCase::SpanUV => {
                let residual = max_abs(rulings.iter().map(|r| r.coefficients.normal_wronskian()));
                let mut notes = Vec::new();
                closed_note(&mut notes);
                out.push(CorollaryCheck {
                    corollary: 9,
                    condition: "x2 x3' = x3 x2'",
                    max_residual: residual,
                    satisfied: residual < tol.tol_dev,
                    closed_form_valid: rmf,
                    notes,
                });
            }
            SpecialCase::General => {}
        }
        out
    }

    fn curvature_cross_check(
        &self,
        grid: &[T],
        n_v: usize,
        verdict: Verdict,
        tol: &Tolerances<T>,
    ) -> Result<CurvatureCrossCheck<T>, RuledError> {
        let vs = uniform_grid(self.def.v_min, self.def.v_max, n_v.max(3));
        let interior_v = &vs[1..vs.len() - 1];
        let interior_s = if grid.len() > 2 { &grid[1..grid.len() - 1] } else { &[][..] };
        let results: Vec<Option<T>> = interior_s
            .par_iter()
            .flat_map_iter(|&s| interior_v.iter().map(move |&v| self.fundamental_forms(s, v).ok().map(|ff| ff.K)))
            .collect();
        let skipped_singular = results.iter().filter(|k| k.is_none()).count();
        let ks: Vec<T> = results.into_iter().flatten().collect();
        let max_abs_k = max_abs(ks.iter().copied());
        let consistent = !ks.is_empty()
            && match verdict {
                Verdict::Yes => max_abs_k < tol.tol_k,
                Verdict::No => max_abs_k > tol.tol_k,
                Verdict::Borderline => true,
            };
        Ok(CurvatureCrossCheck {
            max_abs_k,
            samples: ks.len(),
            skipped_singular,
            tol_k: tol.tol_k,
            consistent,
        })
    }
}
