//! Adapted frames `{T, U, V}` along a base curve.
//!
//! `U = cos θ N + sin θ B` and `V = -sin θ N + cos θ B`. A rotation-minimizing
//! frame (RMF) has `dθ/dt = -|r'| τ`; an explicit policy takes `θ(s)` from an
//! expression. Where the curvature vanishes the Frenet frame and `θ` are
//! undefined, but the RMF is not: there the frame is carried across by double
//! reflection.

use serde::Serialize;
use thiserror::Error;

use crate::curve::{eval_curve, frenet, frenet_from_jet, tangent_data, CurveDef, CurveError, FrenetData};
use crate::expr::Expr;
use crate::real::Real;
use crate::vec3::Vec3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("parameter grid is empty")]
    EmptyGrid,
    #[error("parameter grid must be strictly increasing (index {index})")]
    GridNotIncreasing { index: usize },
    #[error("point and tangent lists differ in length or have fewer than two entries")]
    BadSampleLists,
    #[error("consecutive sample points {index} and {} coincide", index + 1)]
    CoincidentPoints { index: usize },
    #[error("initial normal is not perpendicular to the initial tangent (|U0·T0| = {dot:e})")]
    NotPerpendicular { dot: f64 },
    #[error("initial normal has zero length")]
    ZeroInitialNormal,
}

/// How the angle `θ` between `N` and `U` is chosen along the curve.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaPolicy<T> {
    /// Rotation-minimizing: `θ(t_min) = theta0`, then `dθ/dt = -|r'| τ`.
    Rmf { theta0: T },
    /// `θ(s)` given directly as an expression.
    Explicit { theta: Expr },
}

impl<T> ThetaPolicy<T> {
    pub fn name(&self) -> &'static str {
        match self {
            ThetaPolicy::Rmf { .. } => "rmf",
            ThetaPolicy::Explicit { .. } => "explicit",
        }
    }

    pub fn is_rmf(&self) -> bool {
        matches!(self, ThetaPolicy::Rmf { .. })
    }
}

/// Orthonormal adapted frame with its rotation angle relative to the Frenet frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptedFrame<T> {
    pub tangent: Vec3<T>,
    pub u: Vec3<T>,
    pub v: Vec3<T>,
    pub theta: T,
    /// `dθ/dt` in the curve's own parameter.
    pub theta_prime: T,
}

/// Rotates `(N, B)` by `θ` in the normal plane.
pub fn adapted_frame<T: Real>(fd: &FrenetData<T>, theta: T, theta_prime: T) -> AdaptedFrame<T> {
    let (s, c) = theta.sin_cos();
    AdaptedFrame {
        tangent: fd.tangent,
        u: fd.normal * c + fd.binormal * s,
        v: fd.normal * (-s) + fd.binormal * c,
        theta,
        theta_prime,
    }
}

/// Normal-plane rotation rate `φ = θ'/|r'| + τ` per unit arc length. Zero for an RMF.
pub fn frame_angular_velocity<T: Real>(fd: &FrenetData<T>, af: &AdaptedFrame<T>) -> T {
    af.theta_prime / fd.speed + fd.tau
}

/// Arc-length derivatives of the three frame vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameDerivatives<T> {
    pub tangent: Vec3<T>,
    pub u: Vec3<T>,
    pub v: Vec3<T>,
}

/// `T' = κN`, `U' = -κ cos θ T + φ V`, `V' = κ sin θ T - φ U`.
///
/// With `φ = 0` these are the RMF rules: `U'` and `V'` are parallel to `r'`.
pub fn frame_derivatives<T: Real>(fd: &FrenetData<T>, af: &AdaptedFrame<T>) -> FrameDerivatives<T> {
    let phi = frame_angular_velocity(fd, af);
    let (s, c) = af.theta.sin_cos();
    let k = fd.kappa;
    FrameDerivatives {
        tangent: fd.normal * k,
        u: af.tangent * (-k * c) + af.v * phi,
        v: af.tangent * (k * s) - af.u * phi,
    }
}

fn theta_rate<T: Real>(c: &CurveDef<T>, t: T) -> Result<T, CurveError> {
    let fd = frenet(c, t)?;
    Ok(-fd.speed * fd.tau)
}

/// Integrates `dθ/dt = -|r'| τ` from `t0` to `t1` with `substeps` classical RK4 steps.
pub(crate) fn rk4_theta<T: Real>(
    c: &CurveDef<T>,
    t0: T,
    theta0: T,
    t1: T,
    substeps: usize,
) -> Result<T, CurveError> {
    let n = substeps.max(1);
    let h = (t1 - t0) / T::lit(n as f64);
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let sixth = T::lit(1.0 / 6.0);
    let mut theta = theta0;
    for i in 0..n {
        let t = t0 + h * T::lit(i as f64);
        let t_end = if i + 1 == n { t1 } else { t + h };
        let k1 = theta_rate(c, t)?;
        let k2 = theta_rate(c, t + h * half)?;
        // the rate does not depend on θ, so the two midpoint stages coincide
        let k3 = k2;
        let k4 = theta_rate(c, t_end)?;
        theta = theta + h * sixth * (k1 + two * k2 + two * k3 + k4);
    }
    Ok(theta)
}

/// Tabulates the RMF angle on `grid` starting from `theta0` at `grid[0]`.
///
/// Fails with `VanishingCurvature` if any stage lands where `κ = 0`; use
/// [`FrameField`] to bridge such points.
pub fn theta_rmf<T: Real>(
    c: &CurveDef<T>,
    theta0: T,
    grid: &[T],
    substeps: usize,
) -> Result<Vec<(T, T)>, FrameError> {
    let (&first, rest) = grid.split_first().ok_or(FrameError::EmptyGrid)?;
    theta_rate(c, first)?;
    let mut out = Vec::with_capacity(grid.len());
    out.push((first, theta0));
    let mut prev = (first, theta0);
    for (i, &t) in rest.iter().enumerate() {
        if !(t > prev.0) {
            return Err(FrameError::GridNotIncreasing { index: i + 1 });
        }
        let theta = rk4_theta(c, prev.0, prev.1, t, substeps)?;
        prev = (t, theta);
        out.push(prev);
    }
    Ok(out)
}

fn reflect<T: Real>(x: Vec3<T>, normal: Vec3<T>, normal_sq: T) -> Vec3<T> {
    x - normal * (T::lit(2.0) * normal.dot(x) / normal_sq)
}

/// `(U, V)` spanning the normal plane at one sample.
pub type NormalPair<T> = (Vec3<T>, Vec3<T>);

/// Discrete RMF by the double reflection method.
///
/// Each step reflects `(U_i, T_i)` across the bisecting plane of `x_i, x_{i+1}`,
/// then reflects across the bisecting plane of the reflected tangent and
/// `T_{i+1}`. Returns `(U_i, V_i)` with `V_i = T_i × U_i` for every sample.
pub fn double_reflection<T: Real>(
    points: &[Vec3<T>],
    tangents: &[Vec3<T>],
    u0: Vec3<T>,
) -> Result<Vec<NormalPair<T>>, FrameError> {
    if points.len() != tangents.len() || points.len() < 2 {
        return Err(FrameError::BadSampleLists);
    }
    let u0 = u0.normalize().ok_or(FrameError::ZeroInitialNormal)?;
    let dot = u0.dot(tangents[0]);
    if !(dot.abs() < T::lit(1e-10)) {
        return Err(FrameError::NotPerpendicular { dot: dot.as_f64() });
    }
    let mut out = Vec::with_capacity(points.len());
    let mut u = u0;
    out.push((u, tangents[0].cross(u)));
    for i in 0..points.len() - 1 {
        let v1 = points[i + 1] - points[i];
        let c1 = v1.norm_squared();
        if c1 == T::zero() {
            return Err(FrameError::CoincidentPoints { index: i });
        }
        let u_l = reflect(u, v1, c1);
        let t_l = reflect(tangents[i], v1, c1);
        let v2 = tangents[i + 1] - t_l;
        let c2 = v2.norm_squared();
        u = if c2 > T::zero() { reflect(u_l, v2, c2) } else { u_l };
        out.push((u, tangents[i + 1].cross(u)));
    }
    Ok(out)
}

/// Unit vector perpendicular to `tangent`, from the coordinate axis least
/// aligned with it (ties go to the earlier axis). Stands in for `N` where an
/// RMF starts at a point of zero curvature.
pub fn reference_normal<T: Real>(tangent: Vec3<T>) -> Vec3<T> {
    let a = [tangent.x.abs(), tangent.y.abs(), tangent.z.abs()];
    let axis = if a[0] <= a[1] && a[0] <= a[2] {
        Vec3::unit_x()
    } else if a[1] <= a[2] {
        Vec3::unit_y()
    } else {
        Vec3::unit_z()
    };
    (axis - tangent * axis.dot(tangent))
        .normalize()
        .expect("least-aligned axis is never parallel to a unit tangent")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameOptions {
    /// Uniform intervals of the RMF node table.
    pub intervals: usize,
    /// RK4 steps per interval.
    pub substeps: usize,
    /// Carry the RMF across zero-curvature stretches by double reflection.
    pub bridge_vanishing_curvature: bool,
    /// Double-reflection samples per bridged interval.
    pub bridge_steps: usize,
}

impl Default for FrameOptions {
    fn default() -> Self {
        Self {
            intervals: 256,
            substeps: 4,
            bridge_vanishing_curvature: true,
            bridge_steps: 32,
        }
    }
}

/// Everything known about the adapted frame at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameSample<T> {
    pub t: T,
    pub position: Vec3<T>,
    pub speed: T,
    pub tangent: Vec3<T>,
    pub u: Vec3<T>,
    pub v: Vec3<T>,
    /// `dT/ds`.
    pub curvature_vector: Vec3<T>,
    pub kappa: T,
    /// Absent where the curvature vanishes.
    pub frenet: Option<FrenetData<T>>,
    pub theta: Option<T>,
    /// `dθ/dt`.
    pub theta_prime: Option<T>,
    /// `θ'/|r'| + τ`; zero for the RMF.
    pub phi: T,
}

impl<T: Real> FrameSample<T> {
    pub fn tau(&self) -> Option<T> {
        self.frenet.map(|f| f.tau)
    }

    pub fn adapted(&self) -> Option<AdaptedFrame<T>> {
        Some(AdaptedFrame {
            tangent: self.tangent,
            u: self.u,
            v: self.v,
            theta: self.theta?,
            theta_prime: self.theta_prime?,
        })
    }

    /// `θ` for closed-form formulas. Where `κ = 0` every such formula multiplies
    /// `θ` terms by `κ`, so zero is substituted.
    pub fn theta_or_zero(&self) -> T {
        self.theta.unwrap_or_else(T::zero)
    }

    /// Arc-length frame derivatives, valid with or without a Frenet frame.
    pub fn derivatives(&self) -> FrameDerivatives<T> {
        let k = self.curvature_vector;
        FrameDerivatives {
            tangent: k,
            u: self.tangent * (-k.dot(self.u)) + self.v * self.phi,
            v: self.tangent * (-k.dot(self.v)) - self.u * self.phi,
        }
    }

    pub fn to_frame(&self, w: Vec3<T>) -> [T; 3] {
        [w.dot(self.tangent), w.dot(self.u), w.dot(self.v)]
    }

    pub fn from_frame(&self, c: [T; 3]) -> Vec3<T> {
        self.tangent * c[0] + self.u * c[1] + self.v * c[2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct RmfNode<T> {
    t: T,
    u: Vec3<T>,
    theta: Option<T>,
    /// Last defined angle, for unwrapping after a zero-curvature gap.
    theta_ref: T,
}

/// Adapted frames along a curve under a [`ThetaPolicy`], evaluable at any parameter.
///
/// For the RMF policy a node table is integrated once at construction; queries
/// between nodes integrate from the node at or below the query.
#[derive(Debug, Clone)]
pub struct FrameField<T> {
    curve: CurveDef<T>,
    policy: ThetaPolicy<T>,
    options: FrameOptions,
    nodes: Vec<RmfNode<T>>,
    step: T,
}

impl<T: Real> FrameField<T> {
    pub fn new(curve: CurveDef<T>, policy: ThetaPolicy<T>, options: FrameOptions) -> Result<Self, FrameError> {
        let intervals = options.intervals.max(1);
        let step = (curve.t_max - curve.t_min) / T::lit(intervals as f64);
        let mut field = Self {
            curve,
            policy,
            options,
            nodes: Vec::new(),
            step,
        };
        if let ThetaPolicy::Rmf { theta0 } = field.policy {
            let grid = field.curve.uniform_grid(intervals + 1);
            let mut node = field.start_node(theta0)?;
            field.nodes.push(node);
            for &t in &grid[1..] {
                node = field.propagate(&node, t)?;
                field.nodes.push(node);
            }
        }
        Ok(field)
    }

    pub fn curve(&self) -> &CurveDef<T> {
        &self.curve
    }

    pub fn policy(&self) -> &ThetaPolicy<T> {
        &self.policy
    }

    pub fn options(&self) -> &FrameOptions {
        &self.options
    }

    fn start_node(&self, theta0: T) -> Result<RmfNode<T>, FrameError> {
        let t = self.curve.t_min;
        match frenet(&self.curve, t) {
            Ok(fd) => Ok(RmfNode {
                t,
                u: adapted_frame(&fd, theta0, T::zero()).u,
                theta: Some(theta0),
                theta_ref: theta0,
            }),
            Err(CurveError::VanishingCurvature { .. }) if self.options.bridge_vanishing_curvature => {
                let td = tangent_data(&self.curve, t)?;
                let n = reference_normal(td.tangent);
                let b = td.tangent.cross(n);
                let (s, c) = theta0.sin_cos();
                Ok(RmfNode {
                    t,
                    u: n * c + b * s,
                    theta: None,
                    theta_ref: theta0,
                })
            }
            Err(e) => Err(e.into()),
        }
    }

    fn propagate(&self, from: &RmfNode<T>, t1: T) -> Result<RmfNode<T>, FrameError> {
        if let Some(theta0) = from.theta {
            match rk4_theta(&self.curve, from.t, theta0, t1, self.options.substeps) {
                Ok(theta) => {
                    let fd = frenet(&self.curve, t1)?;
                    return Ok(RmfNode {
                        t: t1,
                        u: adapted_frame(&fd, theta, T::zero()).u,
                        theta: Some(theta),
                        theta_ref: theta,
                    });
                }
                Err(CurveError::VanishingCurvature { .. }) if self.options.bridge_vanishing_curvature => {}
                Err(e) => return Err(e.into()),
            }
        } else if !self.options.bridge_vanishing_curvature {
            return Err(CurveError::VanishingCurvature { t: from.t.as_f64() }.into());
        }

        let u = self.reflect_between(from.t, from.u, t1)?;
        match frenet(&self.curve, t1) {
            Ok(fd) => {
                let raw = u.dot(fd.binormal).atan2(u.dot(fd.normal));
                let theta = unwrap_near(raw, from.theta_ref);
                Ok(RmfNode {
                    t: t1,
                    u,
                    theta: Some(theta),
                    theta_ref: theta,
                })
            }
            Err(CurveError::VanishingCurvature { .. }) => Ok(RmfNode {
                t: t1,
                u,
                theta: None,
                theta_ref: from.theta_ref,
            }),
            Err(e) => Err(e.into()),
        }
    }

    fn reflect_between(&self, t0: T, u0: Vec3<T>, t1: T) -> Result<Vec3<T>, FrameError> {
        let m = self.options.bridge_steps.max(1);
        let mut points = Vec::with_capacity(m + 1);
        let mut tangents = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let t = if i == m {
                t1
            } else {
                t0 + (t1 - t0) * T::lit(i as f64) / T::lit(m as f64)
            };
            let td = tangent_data(&self.curve, t)?;
            points.push(td.position);
            tangents.push(td.tangent);
        }
        // re-project against roundoff before the perpendicularity check
        let u0 = u0 - tangents[0] * u0.dot(tangents[0]);
        let frames = double_reflection(&points, &tangents, u0)?;
        let u = frames[m].0;
        let t_end = tangents[m];
        Ok((u - t_end * u.dot(t_end)).normalize().unwrap_or(u))
    }

    fn node_index(&self, t: T) -> usize {
        let last = self.nodes.len().saturating_sub(2);
        let i = ((t - self.curve.t_min) / self.step).floor().to_usize().unwrap_or(0);
        i.min(last)
    }

    /// Frame at parameter `t`.
    pub fn at(&self, t: T) -> Result<FrameSample<T>, FrameError> {
        let jet = eval_curve(&self.curve, t)?;
        let td = tangent_data(&self.curve, t)?;
        let fd = match frenet_from_jet(t, &jet) {
            Ok(fd) => Some(fd),
            Err(CurveError::VanishingCurvature { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let (u, theta, theta_prime, phi) = match &self.policy {
            ThetaPolicy::Explicit { theta } => {
                let fd = fd.ok_or(CurveError::VanishingCurvature { t: t.as_f64() })?;
                let j = theta.eval_jet(t).map_err(CurveError::from)?;
                let af = adapted_frame(&fd, j.value, j.d1);
                (af.u, Some(j.value), Some(j.d1), frame_angular_velocity(&fd, &af))
            }
            ThetaPolicy::Rmf { .. } => {
                let i = self.node_index(t);
                let base = &self.nodes[i];
                let node = if base.t == t {
                    *base
                } else if self.nodes[i + 1].t == t {
                    self.nodes[i + 1]
                } else {
                    self.propagate(base, t)?
                };
                let theta_prime = match (fd, node.theta) {
                    (Some(f), Some(_)) => Some(-td.speed * f.tau),
                    _ => None,
                };
                (node.u, node.theta, theta_prime, T::zero())
            }
        };
        let v = td.tangent.cross(u);
        Ok(FrameSample {
            t,
            position: td.position,
            speed: td.speed,
            tangent: td.tangent,
            u,
            v,
            curvature_vector: td.curvature_vector,
            kappa: fd.map_or_else(|| td.kappa(), |f| f.kappa),
            frenet: fd,
            theta,
            theta_prime,
            phi,
        })
    }

    /// Frames on an arbitrary parameter list.
    pub fn sample(&self, grid: &[T]) -> Result<Vec<FrameSample<T>>, FrameError> {
        grid.iter().map(|&t| self.at(t)).collect()
    }
}

fn unwrap_near<T: Real>(angle: T, reference: T) -> T {
    let two_pi = T::TAU();
    angle + two_pi * ((reference - angle) / two_pi).round()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn helix(a: f64, b: f64) -> CurveDef<f64> {
        CurveDef::parse("3/5*cos(s)", "3/5*sin(s)", "4/5*s", a, b).unwrap()
    }

    fn vclose(a: Vec3<f64>, b: Vec3<f64>, tol: f64) -> bool {
        (a - b).max_abs_component() < tol
    }

    #[test]
    fn rotation_by_zero_and_quarter_turn() {
        let fd = frenet(&helix(-1.0, 1.0), 0.3).unwrap();
        let a = adapted_frame(&fd, 0.0, 0.0);
        assert_eq!((a.u, a.v), (fd.normal, fd.binormal));
        let q = adapted_frame(&fd, FRAC_PI_2, 0.0);
        assert!(vclose(q.u, fd.binormal, 1e-15) && vclose(q.v, -fd.normal, 1e-15));
    }

    #[test]
    fn helix_frame_at_eighth_turn() {
        let fd = frenet(&helix(-1.0, 1.0), 0.0).unwrap();
        let a = adapted_frame(&fd, FRAC_PI_4, 0.0);
        let r = FRAC_1_SQRT_2;
        let expected = Vec3::new(-r, -0.8 * r, 0.6 * r);
        assert!(vclose(a.u, expected, 1e-15));
        assert!(vclose(a.tangent.cross(a.u), a.v, 1e-15));
    }

    #[test]
    fn helix_rmf_angle_is_linear() {
        let c = helix(0.0, PI);
        let grid = c.uniform_grid(65);
        let table = theta_rmf(&c, 0.0, &grid, 4).unwrap();
        let (t, th) = *table.last().unwrap();
        assert_eq!(t, PI);
        assert!((th + 0.8 * PI).abs() < 1e-12);
    }

    #[test]
    fn planar_curve_keeps_angle() {
        let c = CurveDef::<f64>::parse("cos(s)", "2*sin(s)", "0", 0.0, 3.0).unwrap();
        let table = theta_rmf(&c, 0.7, &c.uniform_grid(31), 4).unwrap();
        assert!(table.iter().all(|&(_, th)| (th - 0.7).abs() < 1e-14));
    }

    #[test]
    fn rmf_rejects_vanishing_curvature_without_bridge() {
        let c = CurveDef::<f64>::parse("s", "s^3", "0", -1.0, 1.0).unwrap();
        let err = theta_rmf(&c, 0.0, &c.uniform_grid(11), 4).unwrap_err();
        assert!(matches!(err, FrameError::Curve(CurveError::VanishingCurvature { .. })));
        let opts = FrameOptions {
            bridge_vanishing_curvature: false,
            ..FrameOptions::default()
        };
        assert!(FrameField::new(c.clone(), ThetaPolicy::Rmf { theta0: 0.0 }, opts).is_err());
    }

    #[test]
    fn rmf_bridges_an_inflection() {
        // planar cubic: RMF normal stays in the plane's normal direction or in-plane
        let c = CurveDef::<f64>::parse("s", "s^3", "0", -1.0, 1.0).unwrap();
        let field = FrameField::new(c, ThetaPolicy::Rmf { theta0: 0.0 }, FrameOptions::default()).unwrap();
        for t in [-0.9, -0.01, 0.0, 0.013, 0.5, 1.0] {
            let f = field.at(t).unwrap();
            assert!(f.u.z.abs() < 1e-10, "U left the plane at {t}");
            assert!(f.u.dot(f.tangent).abs() < 1e-12);
        }
        let f = field.at(0.0).unwrap();
        assert!(f.theta.is_none() && f.frenet.is_none());
        // N flips across the inflection, so θ jumps by π relative to it
        let after = field.at(0.5).unwrap().theta.unwrap();
        assert!((after.abs() - PI).abs() < 1e-9, "{after}");
    }

    #[test]
    fn straight_line_rmf_is_constant() {
        let c = CurveDef::parse("s", "0", "0", 0.0, 4.0).unwrap();
        let field = FrameField::new(c, ThetaPolicy::Rmf { theta0: 0.0 }, FrameOptions::default()).unwrap();
        for t in [0.0, 1.3, 4.0] {
            let f = field.at(t).unwrap();
            assert!(vclose(f.u, Vec3::unit_y(), 1e-14));
            assert!(vclose(f.v, Vec3::unit_z(), 1e-14));
            assert_eq!(f.derivatives().u, Vec3::zero());
        }
    }

    #[test]
    fn double_reflection_on_line() {
        let pts: Vec<_> = (0..10).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        let tan = vec![Vec3::unit_x(); 10];
        let u0 = Vec3::new(0.0, 0.6, 0.8);
        for (u, v) in double_reflection(&pts, &tan, u0).unwrap() {
            assert!(vclose(u, u0, 1e-15));
            assert!(vclose(v, Vec3::unit_x().cross(u0), 1e-15));
        }
    }

    #[test]
    fn double_reflection_errors() {
        let pts = vec![Vec3::zero(), Vec3::zero()];
        let tan = vec![Vec3::unit_x(); 2];
        assert!(matches!(
            double_reflection(&pts, &tan, Vec3::unit_y()),
            Err(FrameError::CoincidentPoints { index: 0 })
        ));
        let pts = vec![Vec3::zero(), Vec3::unit_x()];
        assert!(matches!(
            double_reflection(&pts, &tan, Vec3::new(0.1, 1.0, 0.0)),
            Err(FrameError::NotPerpendicular { .. })
        ));
        assert!(double_reflection(&pts[..1], &tan[..1], Vec3::unit_y()).is_err());
    }

    #[test]
    fn double_reflection_keeps_planar_circle_in_plane() {
        let n = 200;
        let pts: Vec<_> = (0..n)
            .map(|i| {
                let a = i as f64 * 0.05;
                Vec3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        let tan: Vec<_> = (0..n)
            .map(|i| {
                let a = i as f64 * 0.05;
                Vec3::new(-a.sin(), a.cos(), 0.0)
            })
            .collect();
        let frames = double_reflection(&pts, &tan, Vec3::new(-1.0, 0.0, 0.0)).unwrap();
        for (u, _) in frames {
            assert!(u.z.abs() < 1e-10);
        }
    }

    #[test]
    fn derivative_rules() {
        let c = helix(-2.0, 2.0);
        let fd = frenet(&c, 0.4).unwrap();
        // RMF: θ' = -τ at unit speed, U' ∥ T
        let rmf = adapted_frame(&fd, 0.3, -fd.tau);
        let d = frame_derivatives(&fd, &rmf);
        assert!(d.u.dot(rmf.u).abs() < 1e-15 && d.u.dot(rmf.v).abs() < 1e-15);
        assert!(d.u.cross(rmf.tangent).norm() < 1e-15);
        // frozen angle: φ = τ, V-component of U' is 0.8
        let frozen = adapted_frame(&fd, 0.3, 0.0);
        let d = frame_derivatives(&fd, &frozen);
        assert!((frame_angular_velocity(&fd, &frozen) - 0.8).abs() < 1e-14);
        assert!((d.u.dot(frozen.v) - 0.8).abs() < 1e-14);
    }

    #[test]
    fn planar_derivative_with_constant_angle() {
        let c = CurveDef::parse("cos(s)", "sin(s)", "0", -1.0, 1.0).unwrap();
        let fd = frenet(&c, 0.2).unwrap();
        let af = adapted_frame(&fd, 0.9, 0.0);
        let d = frame_derivatives(&fd, &af);
        assert!(vclose(d.u, fd.tangent * (-fd.kappa * 0.9f64.cos()), 1e-15));
    }

    #[test]
    fn field_matches_closed_form_rmf_on_helix() {
        let c = helix(0.0, 2.0 * PI);
        let field = FrameField::new(c.clone(), ThetaPolicy::Rmf { theta0: 0.25 }, FrameOptions::default()).unwrap();
        for t in [0.0, 0.123, 1.0, 3.3, 2.0 * PI] {
            let f = field.at(t).unwrap();
            assert!((f.theta.unwrap() - (0.25 - 0.8 * t)).abs() < 1e-12);
            let fd = frenet(&c, t).unwrap();
            let exact = adapted_frame(&fd, 0.25 - 0.8 * t, -0.8);
            assert!(vclose(f.u, exact.u, 1e-12) && vclose(f.v, exact.v, 1e-12));
            assert_eq!(f.phi, 0.0);
        }
    }

    #[test]
    fn frame_derivatives_match_finite_differences() {
        let c = CurveDef::<f64>::parse("s", "s^2", "s^3", -1.0, 1.0).unwrap();
        let h = 1e-4;
        let policies = [
            ThetaPolicy::Rmf { theta0: 0.4 },
            ThetaPolicy::Explicit { theta: crate::expr::parse("sin(3*s)").unwrap() },
        ];
        for policy in policies {
            let rmf = policy.is_rmf();
            let field = FrameField::new(c.clone(), policy, FrameOptions::default()).unwrap();
            for t in [-0.7, -0.2, 0.1, 0.55] {
                let f = field.at(t).unwrap();
                let fd_u = (field.at(t + h).unwrap().u - field.at(t - h).unwrap().u) / (2.0 * h * f.speed);
                let fd_v = (field.at(t + h).unwrap().v - field.at(t - h).unwrap().v) / (2.0 * h * f.speed);
                let d = f.derivatives();
                assert!(vclose(d.u, fd_u, 1e-5), "{t}: {:?} vs {fd_u:?}", d.u);
                assert!(vclose(d.v, fd_v, 1e-5));
                if rmf {
                    assert!(fd_u.dot(f.v).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn rk4_is_fourth_order_with_varying_torsion() {
        let c = CurveDef::<f64>::parse("s", "s^2", "s^3", 0.0, 1.0).unwrap();
        let reference = theta_rmf(&c, 0.0, &[0.0, 1.0], 4096).unwrap()[1].1;
        let err = |n: usize| (theta_rmf(&c, 0.0, &c.uniform_grid(n + 1), 4).unwrap()[n].1 - reference).abs();
        let ratio = err(16) / err(32);
        assert!((14.0..18.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn explicit_policy_reports_frame_rotation() {
        let c = helix(-1.0, 1.0);
        let policy = ThetaPolicy::Explicit { theta: crate::expr::parse("atan(s)").unwrap() };
        let field = FrameField::new(c, policy, FrameOptions::default()).unwrap();
        let f = field.at(1.0).unwrap();
        assert!((f.theta.unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((f.phi - (0.5 + 0.8)).abs() < 1e-14);
    }

    #[test]
    fn unwrap_picks_nearest_branch() {
        assert!((unwrap_near(0.1, 6.3) - (0.1 + 2.0 * PI)).abs() < 1e-15);
        assert!((unwrap_near(3.0, -3.0) - (3.0 - 2.0 * PI)).abs() < 1e-15);
    }
}
