use std::fmt;

use ruled_core::frame::FrameError;
use ruled_core::mesh_io::MeshError;
use ruled_core::ruled::RuledError;

/// Failures that end a run. Each prints as one `error code=N kind=K: ...` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Geometry(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Geometry(_) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Geometry(_) => "geometry",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Config(m) | CliError::Io(m) | CliError::Geometry(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = self.message().split_whitespace().collect::<Vec<_>>().join(" ");
        write!(f, "error code={} kind={}: {msg}", self.code(), self.kind())
    }
}

impl std::error::Error for CliError {}

impl From<RuledError> for CliError {
    fn from(e: RuledError) -> Self {
        match e {
            RuledError::Parse { .. } | RuledError::EmptyVRange { .. } | RuledError::VOutOfRange { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Geometry(e.to_string()),
        }
    }
}

impl From<FrameError> for CliError {
    fn from(e: FrameError) -> Self {
        CliError::Geometry(e.to_string())
    }
}

impl From<MeshError> for CliError {
    fn from(e: MeshError) -> Self {
        match e {
            MeshError::GridTooSmall { .. } => CliError::Config(e.to_string()),
            MeshError::Surface(e) => e.into(),
        }
    }
}
