//! Command-line front end for the `lablocus-core` checks.
//!
//! The binary is a thin wrapper over [`commands`]; everything it prints is
//! assembled here so the integration tests can drive it either way.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod report;
pub mod schema;
pub mod verify;

pub use commands::Output;
pub use config::{Format, RunConfig};
pub use error::CliError;
