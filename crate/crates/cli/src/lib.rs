//! File formats, CSV ingestion and the subcommands behind the `dpmech` binary.

pub mod commands;
pub mod format;
pub mod ingest;
pub mod report;

pub use commands::{run, tolerance_from_env, Cli, CliError};
