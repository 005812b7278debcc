//! Scenario files, unit handling and the `ncdelay` subcommands.

pub mod commands;
pub mod config;
mod error;
pub mod trace_file;
pub mod units;

pub use config::{PolicyKind, Scenario, SimSettings};
pub use error::CliError;
pub use trace_file::TraceFile;
pub use units::Units;
