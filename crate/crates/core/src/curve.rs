//! Base curves given by coordinate expressions and their Frenet apparatus.
//!
//! Curves may use any regular parameter `t`; arc-length quantities are obtained
//! through `d/ds = (1/|r'|) d/dt`.

use serde::Serialize;
use thiserror::Error;

use crate::expr::{parse, DomainError, Expr, ParseError};
use crate::real::{eps_reg, Real};
use crate::vec3::Vec3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("parameter range [{min}, {max}] is empty")]
    EmptyRange { min: f64, max: f64 },
    #[error("parameter {t} outside [{min}, {max}]")]
    OutOfRange { t: f64, min: f64, max: f64 },
    #[error("coordinate {axis}: {source}")]
    Parse {
        axis: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("degenerate tangent at t = {t} (|r'| = {speed:e})")]
    DegenerateTangent { t: f64, speed: f64 },
    #[error("curvature vanishes at t = {t}; Frenet frame undefined")]
    VanishingCurvature { t: f64 },
}

/// Parametric base curve `r(t) = (x(t), y(t), z(t))` on `[t_min, t_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveDef<T> {
    pub x: Expr,
    pub y: Expr,
    pub z: Expr,
    pub t_min: T,
    pub t_max: T,
}

impl<T: Real> CurveDef<T> {
    pub fn new(x: Expr, y: Expr, z: Expr, t_min: T, t_max: T) -> Result<Self, CurveError> {
        if !(t_min < t_max) {
            return Err(CurveError::EmptyRange {
                min: t_min.as_f64(),
                max: t_max.as_f64(),
            });
        }
        Ok(Self { x, y, z, t_min, t_max })
    }

    /// Builds a curve from three DSL strings.
    pub fn parse(x: &str, y: &str, z: &str, t_min: T, t_max: T) -> Result<Self, CurveError> {
        let p = |axis, src| parse(src).map_err(|source| CurveError::Parse { axis, source });
        Self::new(p("x", x)?, p("y", y)?, p("z", z)?, t_min, t_max)
    }

    pub fn contains(&self, t: T) -> bool {
        t >= self.t_min && t <= self.t_max
    }

    /// `n` equally spaced parameters covering the whole range, endpoints included.
    pub fn uniform_grid(&self, n: usize) -> Vec<T> {
        uniform_grid(self.t_min, self.t_max, n)
    }
}

pub(crate) fn uniform_grid<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let last = T::lit((n - 1) as f64);
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        b
                    } else {
                        a + (b - a) * T::lit(i as f64) / last
                    }
                })
                .collect()
        }
    }
}

/// Position and the first three derivatives with respect to the curve parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet<T> {
    pub position: Vec3<T>,
    pub d1: Vec3<T>,
    pub d2: Vec3<T>,
    pub d3: Vec3<T>,
}

pub fn eval_curve<T: Real>(c: &CurveDef<T>, t: T) -> Result<CurveJet<T>, CurveError> {
    if !c.contains(t) {
        return Err(CurveError::OutOfRange {
            t: t.as_f64(),
            min: c.t_min.as_f64(),
            max: c.t_max.as_f64(),
        });
    }
    let jx = c.x.eval_jet(t)?;
    let jy = c.y.eval_jet(t)?;
    let jz = c.z.eval_jet(t)?;
    Ok(CurveJet {
        position: Vec3::new(jx.value, jy.value, jz.value),
        d1: Vec3::new(jx.d1, jy.d1, jz.d1),
        d2: Vec3::new(jx.d2, jy.d2, jz.d2),
        d3: Vec3::new(jx.d3, jy.d3, jz.d3),
    })
}

/// Frenet apparatus at one parameter value. Curvature and torsion are per unit
/// arc length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetData<T> {
    pub position: Vec3<T>,
    pub tangent: Vec3<T>,
    pub normal: Vec3<T>,
    pub binormal: Vec3<T>,
    pub kappa: T,
    pub tau: T,
    /// `|r'|` in the curve's own parameter.
    pub speed: T,
}

/// What survives where the curvature vanishes: the tangent and the curvature
/// vector `dT/ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentData<T> {
    pub position: Vec3<T>,
    pub tangent: Vec3<T>,
    pub speed: T,
    pub curvature_vector: Vec3<T>,
}

impl<T: Real> TangentData<T> {
    pub fn kappa(&self) -> T {
        self.curvature_vector.norm()
    }
}

fn tangent_from_jet<T: Real>(t: T, j: &CurveJet<T>) -> Result<TangentData<T>, CurveError> {
    let speed = j.d1.norm();
    if !(speed > eps_reg()) {
        return Err(CurveError::DegenerateTangent {
            t: t.as_f64(),
            speed: speed.as_f64(),
        });
    }
    let tangent = j.d1 / speed;
    let curvature_vector = (j.d2 - tangent * j.d2.dot(tangent)) / (speed * speed);
    Ok(TangentData {
        position: j.position,
        tangent,
        speed,
        curvature_vector,
    })
}

/// Tangent-only variant of [`frenet`], defined wherever the curve is regular.
pub fn tangent_data<T: Real>(c: &CurveDef<T>, t: T) -> Result<TangentData<T>, CurveError> {
    let j = eval_curve(c, t)?;
    tangent_from_jet(t, &j)
}

pub(crate) fn frenet_from_jet<T: Real>(t: T, j: &CurveJet<T>) -> Result<FrenetData<T>, CurveError> {
    let td = tangent_from_jet(t, j)?;
    let c1 = j.d1.cross(j.d2);
    let cn = c1.norm();
    if !(cn > eps_reg()) {
        return Err(CurveError::VanishingCurvature { t: t.as_f64() });
    }
    let binormal = c1 / cn;
    let normal = binormal.cross(td.tangent);
    let speed = td.speed;
    Ok(FrenetData {
        position: j.position,
        tangent: td.tangent,
        normal,
        binormal,
        kappa: cn / (speed * speed * speed),
        tau: c1.dot(j.d3) / (cn * cn),
        speed,
    })
}

/// Frenet frame, curvature and torsion for an arbitrary regular parameter:
/// `κ = |r'×r''|/|r'|³`, `τ = det(r', r'', r''')/|r'×r''|²`.
pub fn frenet<T: Real>(c: &CurveDef<T>, t: T) -> Result<FrenetData<T>, CurveError> {
    let j = eval_curve(c, t)?;
    frenet_from_jet(t, &j)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport<T> {
    pub samples: usize,
    /// Parameters where `|r'| <= EPS_REG`, or where evaluation failed.
    pub tangent_violations: Vec<T>,
    /// Parameters where `|r' × r''| <= EPS_REG`.
    pub curvature_violations: Vec<T>,
    pub usable_for_frenet: bool,
    pub usable_for_tangent_only: bool,
}

/// Samples the curve uniformly and reports where it is singular.
pub fn validate_regular<T: Real>(c: &CurveDef<T>, n_samples: usize) -> RegularityReport<T> {
    let n = n_samples.max(2);
    let mut tangent_violations = Vec::new();
    let mut curvature_violations = Vec::new();
    for t in c.uniform_grid(n) {
        match eval_curve(c, t) {
            Ok(j) => {
                if !(j.d1.norm() > eps_reg()) {
                    tangent_violations.push(t);
                }
                if !(j.d1.cross(j.d2).norm() > eps_reg()) {
                    curvature_violations.push(t);
                }
            }
            Err(_) => {
                tangent_violations.push(t);
                curvature_violations.push(t);
            }
        }
    }
    let tangent_ok = tangent_violations.is_empty();
    RegularityReport {
        samples: n,
        usable_for_frenet: tangent_ok && curvature_violations.is_empty(),
        usable_for_tangent_only: tangent_ok && !curvature_violations.is_empty(),
        tangent_violations,
        curvature_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn helix() -> CurveDef<f64> {
        CurveDef::parse("3/5*cos(s)", "3/5*sin(s)", "4/5*s", -10.0, 10.0).unwrap()
    }

    fn close(a: Vec3<f64>, b: Vec3<f64>, tol: f64) -> bool {
        (a - b).max_abs_component() < tol
    }

    #[test]
    fn helix_jet_at_origin() {
        let j = eval_curve(&helix(), 0.0).unwrap();
        assert!(close(j.position, Vec3::new(0.6, 0.0, 0.0), 1e-15));
        assert!(close(j.d1, Vec3::new(0.0, 0.6, 0.8), 1e-15));
    }

    #[test]
    fn line_has_no_higher_derivatives() {
        let c = CurveDef::parse("s", "0", "0", 0.0, 10.0).unwrap();
        let j = eval_curve(&c, 7.0).unwrap();
        assert_eq!(j.d2, Vec3::zero());
        assert_eq!(j.d3, Vec3::zero());
        assert!(matches!(frenet(&c, 7.0), Err(CurveError::VanishingCurvature { .. })));
        let td = tangent_data(&c, 7.0).unwrap();
        assert_eq!(td.tangent, Vec3::unit_x());
        assert_eq!(td.kappa(), 0.0);
    }

    #[test]
    fn parabola_derivatives() {
        let c = CurveDef::parse("s^2", "s", "0", -2.0, 2.0).unwrap();
        let j = eval_curve(&c, 1.0).unwrap();
        assert_eq!(j.d1, Vec3::new(2.0, 1.0, 0.0));
        assert_eq!(j.d2, Vec3::new(2.0, 0.0, 0.0));
    }

    #[test]
    fn helix_frenet_frame() {
        let fd = frenet(&helix(), 0.0).unwrap();
        assert!(close(fd.tangent, Vec3::new(0.0, 0.6, 0.8), 1e-15));
        assert!(close(fd.normal, Vec3::new(-1.0, 0.0, 0.0), 1e-15));
        assert!(close(fd.binormal, Vec3::new(0.0, -0.8, 0.6), 1e-15));
        for s in [-3.0, 0.5, 2.0, 9.0] {
            let fd = frenet(&helix(), s).unwrap();
            assert!((fd.kappa - 0.6).abs() < 1e-14);
            assert!((fd.tau - 0.8).abs() < 1e-14);
            assert!((fd.speed - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(eval_curve(&helix(), 10.5), Err(CurveError::OutOfRange { .. })));
        assert!(CurveDef::parse("s", "0", "0", 1.0, 1.0).is_err());
    }

    #[test]
    fn regularity_reports() {
        let r = validate_regular(&helix(), 100);
        assert!(r.usable_for_frenet && r.tangent_violations.is_empty());

        let line = CurveDef::parse("s", "0", "0", 0.0, 1.0).unwrap();
        let r = validate_regular(&line, 10);
        assert_eq!(r.curvature_violations.len(), 10);
        assert!(r.usable_for_tangent_only && !r.usable_for_frenet);

        let cusp = CurveDef::parse("s^3", "s^2", "0", -1.0, 1.0).unwrap();
        let r = validate_regular(&cusp, 101);
        assert_eq!(r.tangent_violations, vec![0.0]);
        assert!(!r.usable_for_frenet && !r.usable_for_tangent_only);
    }

    #[test]
    fn grid_hits_endpoints_exactly() {
        let g = uniform_grid(-5.0, 5.0, 101);
        assert_eq!(g[0], -5.0);
        assert_eq!(g[100], 5.0);
        assert_eq!(g[50], 0.0);
    }
}
