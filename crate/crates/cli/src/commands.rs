use std::path::{Path, PathBuf};

use ruled_core::mesh_io::{frame_rows, invariant_rows, tessellate, write_frames, write_obj, write_report};
use ruled_core::{Format, FrameOptions, Surface, Tolerances};

use crate::args::{Command, JobArgs};
use crate::config::JobConfig;
use crate::error::CliError;
use crate::output::write_atomic;
use crate::verify;

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerifyFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerifyFailed => 1,
        }
    }
}

/// A loaded configuration with command-line overrides applied.
pub struct Job {
    pub config: JobConfig,
    pub surface: Surface,
    pub n_s: usize,
    pub n_v: usize,
    pub tol: Tolerances<f64>,
    pub format: Format,
    out: Option<PathBuf>,
}

impl Job {
    pub fn load(args: &JobArgs) -> Result<Self, CliError> {
        let config = JobConfig::load(&args.config)?;
        Self::from_config(config, args)
    }

    pub fn from_config(config: JobConfig, args: &JobArgs) -> Result<Self, CliError> {
        let n_s = args.samples.unwrap_or(config.grid.n_s);
        if n_s < 2 {
            return Err(CliError::Usage(format!("--samples must be at least 2, got {n_s}")));
        }
        let mut tol = config.tolerances();
        if let Some(t) = args.tol_dev {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("--tol-dev must be a positive number, got {t}")));
            }
            tol.tol_dev = t;
        }
        let def = config.surface_def()?;
        let surface = Surface::new(def, FrameOptions::default())?;
        Ok(Self {
            n_v: config.grid.n_v,
            format: args.format.unwrap_or(config.outputs.format),
            out: args.out.clone(),
            config,
            surface,
            n_s,
            tol,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        self.surface.curve().uniform_grid(self.n_s)
    }

    fn output(&self, configured: &Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
        self.out
            .clone()
            .or_else(|| configured.clone())
            .ok_or_else(|| CliError::Usage(format!("no output path: pass --out or set outputs.{key}")))
    }

    fn optional_output(&self, configured: &Option<PathBuf>) -> Option<PathBuf> {
        self.out.clone().or_else(|| configured.clone())
    }
}

pub fn run(command: &Command) -> Result<Status, CliError> {
    let job = Job::load(command.args())?;
    match command {
        Command::Frames(_) => frames(&job),
        Command::Surface(_) => surface(&job),
        Command::Classify(_) => classify(&job),
        Command::Verify(_) => verify(&job),
    }
}

fn announce(what: &str, path: &Path) {
    println!("{what} -> {}", path.display());
}

pub fn frames(job: &Job) -> Result<Status, CliError> {
    let path = job.output(&job.config.outputs.frames, "frames")?;
    let rows = frame_rows(job.surface.frames(), &job.grid())?;
    write_atomic(&path, &write_frames(&rows, job.format))?;
    announce(&format!("frames: {} samples", rows.len()), &path);
    Ok(Status::Ok)
}

pub fn surface(job: &Job) -> Result<Status, CliError> {
    let path = job.output(&job.config.outputs.mesh, "mesh")?;
    let mesh = tessellate(&job.surface, job.n_s, job.n_v)?;
    write_atomic(&path, &write_obj(&mesh))?;
    let shading = if mesh.flat_shaded { ", flat-shaded" } else { "" };
    announce(
        &format!("surface: {} vertices, {} triangles{shading}", mesh.vertices.len(), mesh.faces.len()),
        &path,
    );
    Ok(Status::Ok)
}

pub fn classify(job: &Job) -> Result<Status, CliError> {
    let path = job.output(&job.config.outputs.report, "report")?;
    let report = job.surface.classify(job.n_s, job.n_v, &job.tol)?;
    let rows = invariant_rows(&job.surface, &job.grid());
    write_atomic(&path, &write_report(&report, &rows, job.format))?;
    let verdict = serde_json::to_value(report.developable.verdict).unwrap_or_default();
    let case = serde_json::to_value(report.special_case).unwrap_or_default();
    announce(
        &format!(
            "classify: developable={} max|det|={:e} special_case={}",
            verdict.as_str().unwrap_or("?"),
            report.developable.max_abs_det,
            case.as_str().unwrap_or("?"),
        ),
        &path,
    );
    Ok(Status::Ok)
}

pub fn verify(job: &Job) -> Result<Status, CliError> {
    let outcome = verify::run(job)?;
    for c in &outcome.checks {
        println!("{}", c.summary_line());
    }
    if let Some(path) = job.optional_output(&job.config.outputs.report) {
        write_atomic(&path, &verify::render(&outcome, job.format))?;
        announce("verify: report", &path);
    }
    let failed = outcome.checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        println!("verify: all {} checks passed", outcome.checks.len());
        Ok(Status::Ok)
    } else {
        println!("verify: {failed} of {} checks failed", outcome.checks.len());
        Ok(Status::VerifyFailed)
    }
}
