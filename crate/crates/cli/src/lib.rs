//! Command-line front end: load a JSON job, run one computation, write artifacts.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage or configuration
//! error, 3 geometry error.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use args::{Cli, Command, JobArgs};
pub use commands::{run, Job, Status};
pub use config::JobConfig;
pub use error::CliError;
