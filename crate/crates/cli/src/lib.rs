//! The `ihs` command-line tool: instance files, solver front ends, the
//! absorption pipeline and grid experiments.

pub mod args;
mod commands;
pub mod experiment;
pub mod instance;
pub mod models;
pub mod witness;

use thiserror::Error;

pub use args::Cli;
pub use commands::execute;

/// A search or pipeline run produced a certificate, or a check passed.
pub const EXIT_OK: i32 = 0;
/// A completed run that certifies nothing: a rejected witness or a failed pipeline.
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSAT: i32 = 10;
pub const EXIT_TIMEOUT: i32 = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("{0}: {1}")]
    Instance(String, #[source] instance::InstanceError),
    #[error(transparent)]
    Core(#[from] ihs_core::Error),
    #[error("emitted certificate failed validation: {0}")]
    Certificate(#[from] ihs_core::CertificateError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Certificate(_) => EXIT_REJECTED,
            _ => EXIT_USAGE,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io("i/o".into(), e)
    }
}
