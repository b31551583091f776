//! Command-line pipelines for cedist: configuration handling and the
//! subcommands behind the `cedist` binary.

pub mod commands;
pub mod config;

pub use commands::{run, Command, Overrides};
pub use config::RunConfig;

/// Exit code for unreadable or invalid configuration.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for failures while running a pipeline.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(#[from] cedist::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}
