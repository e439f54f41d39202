//! Experiment driver for the `stobgk` toolkit.
//!
//! A run is described by one JSON [`config::RunConfig`]. Each subcommand
//! writes an atomic bundle of CSV tables stamped with the config hash,
//! master seed and code version, plus the resolved config, the audit report
//! and a manifest of file hashes. Given the same config and seed, every
//! output byte is the same regardless of how many worker threads ran.

pub mod bundle;
pub mod commands;
pub mod config;
pub mod csvio;
pub mod error;
pub mod presets;
pub mod stored;

pub use commands::{Outcome, RunOptions};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
