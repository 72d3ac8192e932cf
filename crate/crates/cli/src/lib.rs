//! Library half of the `hypermatch` command-line tool: configuration,
//! experiment drivers and output writers.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::path::Path;

use hypermatch::Error;

pub use commands::{execute, Outcome};
pub use config::{ExperimentConfig, GraphSpec, Job};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::ResourceLimit(_) | Error::GuardViolation { .. } => CliError::Resource(msg),
            Error::InvalidParameter(_)
            | Error::NotActive { .. }
            | Error::MalformedEdge(_)
            | Error::NoPerfectMatching
            | Error::MissingAux(_)
            | Error::NotNormalized(_)
            | Error::Parse { .. } => CliError::Config(msg),
        }
    }
}

/// Run `config`, write its outputs into `out`, and turn failed checks into
/// an invariant error after the files are on disk.
pub fn run(config: &ExperimentConfig, workers: usize, out: &Path) -> Result<Outcome, CliError> {
    let outcome = execute(config, workers)?;
    output::write_run(out, config, &outcome.artifacts)?;
    if !outcome.violations.is_empty() {
        return Err(CliError::Invariant(outcome.violations.join("; ")));
    }
    Ok(outcome)
}
