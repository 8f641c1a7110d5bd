//! Front end of the `qrad` binary: configuration and sweep dispatch.

pub mod config;
pub mod run;

pub use config::{parse_config, Injection, RunConfig, SweepKind};

/// Failures mapped to the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}
