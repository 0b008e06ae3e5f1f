//! Invariants of the base curve `v = 0` as a curve on the ruled surface.
//!
//! With `n = sqrt(x2² + x3²)`:
//!
//! * geodesic curvature `k_g = κ (x2 cos θ - x3 sin θ) / n`
//! * normal curvature `k_n = -κ (x3 cos θ + x2 sin θ) / n`
//! * `⟨N̄ × N̄', T'⟩ = -κ²/n² (½ sin 2θ (x3² - x2²) - cos 2θ x2 x3)`, which equals `-k_g k_n`
//!
//! The last quantity is not the Darboux geodesic torsion. The Rodrigues
//! residual `ρ = ⟨N̄', N̄ × T⟩ = -(θ'/|r'| + τ) + (x2' x3 - x2 x3')/n²` is
//! computed alongside it; the curve is a line of curvature exactly where
//! `ρ = 0`. Both are reported so their disagreement stays visible.

use serde::Serialize;
use thiserror::Error;

use crate::curve::tangent_data;
use crate::real::{eps_reg, max_abs, Real, FD_STEP};
use crate::ruled::{RuledError, RuledSurface, Tolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("ruling is tangent to the base curve (x2 = x3 = 0)")]
    TangentRuling,
    #[error("Frenet frame undefined at s = {s}")]
    NoFrenetFrame { s: f64 },
    #[error(transparent)]
    Ruled(#[from] RuledError),
}

fn normal_part<T: Real>(x2: T, x3: T) -> Result<T, InvariantError> {
    let n = (x2 * x2 + x3 * x3).sqrt();
    if n > eps_reg() {
        Ok(n)
    } else {
        Err(InvariantError::TangentRuling)
    }
}

pub fn geodesic_curvature<T: Real>(x2: T, x3: T, theta: T, kappa: T) -> Result<T, InvariantError> {
    let n = normal_part(x2, x3)?;
    let (s, c) = theta.sin_cos();
    Ok(kappa * (x2 * c - x3 * s) / n)
}

pub fn normal_curvature<T: Real>(x2: T, x3: T, theta: T, kappa: T) -> Result<T, InvariantError> {
    let n = normal_part(x2, x3)?;
    let (s, c) = theta.sin_cos();
    Ok(-kappa * (x3 * c + x2 * s) / n)
}

/// `⟨N̄ × N̄', T'⟩` in the double-angle form.
pub fn geodesic_torsion_paper<T: Real>(x2: T, x3: T, theta: T, kappa: T) -> Result<T, InvariantError> {
    let n = normal_part(x2, x3)?;
    let two_theta = theta + theta;
    let half = T::lit(0.5);
    Ok(-kappa * kappa / (n * n) * (half * two_theta.sin() * (x3 * x3 - x2 * x2) - two_theta.cos() * x2 * x3))
}

/// The same quantity factored as `κ² (x2 sin θ + x3 cos θ)(x2 cos θ - x3 sin θ) / n²`.
pub fn geodesic_torsion_factored<T: Real>(x2: T, x3: T, theta: T, kappa: T) -> Result<T, InvariantError> {
    let n = normal_part(x2, x3)?;
    let (s, c) = theta.sin_cos();
    Ok(kappa * kappa * (x2 * s + x3 * c) * (x2 * c - x3 * s) / (n * n))
}

/// `[x2 cos θ - x3 sin θ, x3 cos θ + x2 sin θ, ½ sin 2θ (x3² - x2²) - cos 2θ x2 x3]`:
/// zero respectively for a geodesic, an asymptotic curve and the double-angle
/// line-of-curvature condition.
pub fn theorem_residuals<T: Real>(x2: T, x3: T, theta: T) -> [T; 3] {
    let (s, c) = theta.sin_cos();
    let two_theta = theta + theta;
    [
        x2 * c - x3 * s,
        x3 * c + x2 * s,
        T::lit(0.5) * two_theta.sin() * (x3 * x3 - x2 * x2) - two_theta.cos() * x2 * x3,
    ]
}

/// Darboux quantities of the base curve from finite differences of the
/// surface normal and tangent, independent of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DarbouxOracle<T> {
    /// `⟨N̄ × T, T'⟩`
    pub k_g: T,
    /// `⟨T', N̄⟩` with `T'` from the curve jets
    pub k_n: T,
    /// `⟨N̄ × N̄', T'⟩`
    pub tau_g: T,
    /// `⟨N̄', N̄ × T⟩`
    pub rho: T,
}

/// Central differences with step `FD_STEP` in the curve parameter; needs the
/// stencil inside the parameter range and a defined normal at `v = 0` on it.
pub fn darboux_oracle<T: Real>(surface: &RuledSurface<T>, s: T) -> Result<DarbouxOracle<T>, InvariantError> {
    let h = T::lit(FD_STEP);
    let two_h = h + h;
    let curve = surface.curve();
    let here = tangent_data(curve, s).map_err(RuledError::from)?;
    let t_plus = tangent_data(curve, s + h).map_err(RuledError::from)?.tangent;
    let t_minus = tangent_data(curve, s - h).map_err(RuledError::from)?.tangent;
    let normal = surface.surface_normal(s, T::zero())?;
    let n_plus = surface.surface_normal(s + h, T::zero())?;
    let n_minus = surface.surface_normal(s - h, T::zero())?;
    let arc = two_h * here.speed;
    let dt = (t_plus - t_minus) / arc;
    let dn = (n_plus - n_minus) / arc;
    let t = here.tangent;
    Ok(DarbouxOracle {
        k_g: normal.cross(t).dot(dt),
        k_n: here.curvature_vector.dot(normal),
        tau_g: normal.cross(dn).dot(dt),
        rho: dn.dot(normal.cross(t)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineOfCurvatureResidual<T> {
    pub finite_difference: T,
    pub closed_form: T,
}

/// Rodrigues residual `ρ = ⟨N̄', N̄ × T⟩` along the base curve, by finite
/// differences and in closed form.
pub fn line_of_curvature_standard<T: Real>(
    surface: &RuledSurface<T>,
    s: T,
) -> Result<LineOfCurvatureResidual<T>, InvariantError> {
    let closed_form = rho_closed(surface, s)?;
    let oracle = darboux_oracle(surface, s)?;
    Ok(LineOfCurvatureResidual {
        finite_difference: oracle.rho,
        closed_form,
    })
}

fn rho_closed<T: Real>(surface: &RuledSurface<T>, s: T) -> Result<T, InvariantError> {
    let r = surface.ruling(s)?;
    let c = &r.coefficients;
    let n = normal_part(c.value[1], c.value[2])?;
    Ok(-r.frame.phi - c.normal_wronskian() / (n * n))
}

/// Base-curve invariants at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaseCurveInvariants<T> {
    pub s: T,
    pub kappa: T,
    pub tau: T,
    pub theta: T,
    pub x: [T; 3],
    pub k_g: T,
    pub k_n: T,
    pub tau_g_paper: T,
    /// Darboux geodesic torsion `-ρ`, closed form.
    pub tau_g_standard: T,
    pub rho_closed: T,
    /// Finite-difference `ρ`; absent where the stencil leaves the range.
    pub rho_standard: Option<T>,
    pub residual_t1: T,
    pub residual_t2: T,
    pub residual_t3: T,
    pub oracle: Option<DarbouxOracle<T>>,
}

pub fn base_curve_invariants<T: Real>(surface: &RuledSurface<T>, s: T) -> Result<BaseCurveInvariants<T>, InvariantError> {
    let r = surface.ruling(s)?;
    let f = &r.frame;
    let (Some(theta), Some(fd)) = (f.theta, f.frenet) else {
        return Err(InvariantError::NoFrenetFrame { s: s.as_f64() });
    };
    let [_, x2, x3] = r.coefficients.value;
    let kappa = f.kappa;
    let rho_closed = rho_closed(surface, s)?;
    let [residual_t1, residual_t2, residual_t3] = theorem_residuals(x2, x3, theta);
    let oracle = darboux_oracle(surface, s).ok();
    Ok(BaseCurveInvariants {
        s,
        kappa,
        tau: fd.tau,
        theta,
        x: r.coefficients.value,
        k_g: geodesic_curvature(x2, x3, theta, kappa)?,
        k_n: normal_curvature(x2, x3, theta, kappa)?,
        tau_g_paper: geodesic_torsion_paper(x2, x3, theta, kappa)?,
        tau_g_standard: -rho_closed,
        rho_closed,
        rho_standard: oracle.map(|o| o.rho),
        residual_t1,
        residual_t2,
        residual_t3,
        oracle,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremSummary<T> {
    pub policy: &'static str,
    pub samples: usize,
    /// Grid points skipped because the ruling is tangent or the Frenet frame is undefined.
    pub excluded: Vec<T>,
    pub max_residual_t1: T,
    pub max_residual_t2: T,
    pub max_residual_t3: T,
    pub max_rho_closed: T,
    pub max_rho_finite_difference: Option<T>,
    pub geodesic: bool,
    pub asymptotic: bool,
    pub line_of_curvature_paper: bool,
    pub line_of_curvature_standard: bool,
    /// `x2 = x3 = 0` on the whole grid, i.e. `X ∥ T`.
    pub tangent_director: bool,
    pub notes: Vec<String>,
    pub tol_inv: T,
    pub tol_fd: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport<T> {
    pub samples: Vec<BaseCurveInvariants<T>>,
    pub summary: TheoremSummary<T>,
}

/// Evaluates the base-curve conditions on `grid`.
pub fn theorem_report<T: Real>(surface: &RuledSurface<T>, grid: &[T], tol: &Tolerances<T>) -> TheoremReport<T> {
    let mut samples = Vec::with_capacity(grid.len());
    let mut excluded = Vec::new();
    let mut max_normal_part = T::zero();
    for &s in grid {
        if let Ok(c) = surface.coefficients(s) {
            max_normal_part = max_normal_part.max(c.normal_part_sq().sqrt());
        }
        match base_curve_invariants(surface, s) {
            Ok(b) => samples.push(b),
            Err(_) => excluded.push(s),
        }
    }
    let max_of = |f: fn(&BaseCurveInvariants<T>) -> T| max_abs(samples.iter().map(f));
    let max_residual_t1 = max_of(|b| b.residual_t1);
    let max_residual_t2 = max_of(|b| b.residual_t2);
    let max_residual_t3 = max_of(|b| b.residual_t3);
    let max_rho_closed = max_of(|b| b.rho_closed);
    let fd: Vec<T> = samples.iter().filter_map(|b| b.rho_standard).collect();
    let max_rho_finite_difference = (!fd.is_empty()).then(|| max_abs(fd.iter().copied()));
    let any = !samples.is_empty();

    let mut notes = Vec::new();
    if !surface.is_rmf() {
        notes.push(
            "double-angle line-of-curvature condition was derived for the rotation-minimizing frame; evaluated under an explicit θ".into(),
        );
    }
    let summary = TheoremSummary {
        policy: surface.def().theta.name(),
        samples: samples.len(),
        excluded,
        max_residual_t1,
        max_residual_t2,
        max_residual_t3,
        max_rho_closed,
        max_rho_finite_difference,
        geodesic: any && max_residual_t1 < tol.tol_inv,
        asymptotic: any && max_residual_t2 < tol.tol_inv,
        line_of_curvature_paper: any && max_residual_t3 < tol.tol_inv,
        line_of_curvature_standard: max_rho_finite_difference.is_some_and(|m| m < tol.tol_fd),
        tangent_director: !(max_normal_part > eps_reg()),
        notes,
        tol_inv: tol.tol_inv,
        tol_fd: tol.tol_fd,
    };
    TheoremReport { samples, summary }
}
