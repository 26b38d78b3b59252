//! Configuration parsing and run modes behind the `spinorbit` binary.

pub mod config;
mod error;
pub mod run;

pub use config::{parse_config, parse_config_for, Format, Mode, RunConfig};
pub use error::CliError;
pub use run::{render, run, Rendered, SCHEMA_VERSION};
