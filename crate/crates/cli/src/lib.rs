//! Command-line front end for `tamagawa-core`: parallel twist scans,
//! Erdős–Kac reports, squarefree ideal counts and descent audits, with CSV,
//! JSON and SVG output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod scan;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
