//! Command-line front end: `synth`, `extract`, `ncv` and `report`.

mod args;
mod commands;
mod config;

pub use args::{Cli, Command, CommonArgs, ModelChoice};
pub use commands::{cmd_extract, cmd_ncv, cmd_report, cmd_synth, extract_patient, format_summary, run};
pub use config::{ExtractSettings, RunConfig};

use std::fmt;

/// Failure of a command, split by exit code: 2 for configuration and
/// validation problems detected before work starts, 1 for everything else.
#[derive(Debug)]
pub enum CliError {
    Invalid(anyhow::Error),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn invalid(msg: impl fmt::Display) -> Self {
        CliError::Invalid(anyhow::anyhow!("{msg}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(e) => write!(f, "invalid input: {e:#}"),
            CliError::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}
