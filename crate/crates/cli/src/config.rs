//! Job configuration: one JSON document per run.

use std::path::{Path, PathBuf};

use ruled_core::curve::CurveError;
use ruled_core::expr::parse;
use ruled_core::ruled::RuledError;
use ruled_core::{CurveDef, DirectorField, Format, Policy, SurfaceDef, ThetaPolicy, Tolerances};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub curve: CurveConfig,
    pub theta: ThetaConfig,
    pub director: DirectorConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    /// Theorem flags `verify` must reproduce.
    #[serde(default)]
    pub expect: Expectations,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub x: String,
    pub y: String,
    pub z: String,
    pub s_range: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaMode {
    Rmf,
    Explicit,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaConfig {
    pub mode: ThetaMode,
    pub theta0: Option<f64>,
    pub expr: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectorConfig {
    pub x1: String,
    pub x2: String,
    pub x3: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_s: usize,
    pub n_v: usize,
    pub v_range: [f64; 2],
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub tol_dev: Option<f64>,
    pub tol_inv: Option<f64>,
    #[serde(rename = "tol_K", alias = "tol_k")]
    pub tol_k: Option<f64>,
    pub tol_fd: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub mesh: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub frames: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    pub geodesic: Option<bool>,
    pub asymptotic: Option<bool>,
    pub line_of_curvature_paper: Option<bool>,
    pub line_of_curvature_standard: Option<bool>,
    pub developable: Option<bool>,
}

impl Expectations {
    pub fn entries(&self) -> impl Iterator<Item = (&'static str, bool)> {
        [
            ("geodesic", self.geodesic),
            ("asymptotic", self.asymptotic),
            ("line_of_curvature_paper", self.line_of_curvature_paper),
            ("line_of_curvature_standard", self.line_of_curvature_standard),
            ("developable", self.developable),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
    }
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: JobConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let t = &self.theta;
        match (t.mode, t.theta0.is_some(), t.expr.is_some()) {
            (ThetaMode::Rmf, true, false) | (ThetaMode::Explicit, false, true) => {}
            (ThetaMode::Rmf, ..) => {
                return Err(CliError::Config("theta mode \"rmf\" takes theta0 and no expr".into()));
            }
            (ThetaMode::Explicit, ..) => {
                return Err(CliError::Config("theta mode \"explicit\" takes expr and no theta0".into()));
            }
        }
        if self.grid.n_s < 2 || self.grid.n_v < 2 {
            return Err(CliError::Config(format!(
                "grid needs n_s >= 2 and n_v >= 2, got {} x {}",
                self.grid.n_s, self.grid.n_v
            )));
        }
        let tol = &self.tolerances;
        for (name, v) in [("tol_dev", tol.tol_dev), ("tol_inv", tol.tol_inv), ("tol_K", tol.tol_k), ("tol_fd", tol.tol_fd)] {
            if v.is_some_and(|v| !(v > 0.0 && v.is_finite())) {
                return Err(CliError::Config(format!("{name} must be a positive number")));
            }
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances<f64> {
        let d = Tolerances::default();
        let t = &self.tolerances;
        Tolerances {
            tol_dev: t.tol_dev.unwrap_or(d.tol_dev),
            tol_inv: t.tol_inv.unwrap_or(d.tol_inv),
            tol_fd: t.tol_fd.unwrap_or(d.tol_fd),
            tol_k: t.tol_k.unwrap_or(d.tol_k),
        }
    }

    pub fn policy(&self) -> Result<Policy, CliError> {
        Ok(match self.theta.mode {
            ThetaMode::Rmf => ThetaPolicy::Rmf {
                theta0: self.theta.theta0.unwrap_or_default(),
            },
            ThetaMode::Explicit => {
                let src = self.theta.expr.as_deref().unwrap_or_default();
                let theta = parse(src).map_err(|e| CliError::Config(format!("theta.expr: {e}")))?;
                ThetaPolicy::Explicit { theta }
            }
        })
    }

    /// Parses every expression; syntax errors are configuration errors.
    pub fn surface_def(&self) -> Result<SurfaceDef, CliError> {
        let c = &self.curve;
        let curve = CurveDef::parse(&c.x, &c.y, &c.z, c.s_range[0], c.s_range[1]).map_err(|e| match e {
            CurveError::Parse { axis, source } => CliError::Config(format!("curve.{axis}: {source}")),
            other => CliError::Config(format!("curve: {other}")),
        })?;
        let d = &self.director;
        let director = DirectorField::parse(&d.x1, &d.x2, &d.x3).map_err(|e| match e {
            RuledError::Parse { which, source } => CliError::Config(format!("director.{which}: {source}")),
            other => CliError::Config(format!("director: {other}")),
        })?;
        let [v_min, v_max] = self.grid.v_range;
        SurfaceDef::new(curve, self.policy()?, director, v_min, v_max)
            .map_err(|e| CliError::Config(format!("grid.v_range: {e}")))
    }
}
