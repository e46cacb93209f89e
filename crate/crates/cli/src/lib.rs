//! Experiment harness: training runs, noise and mixing sweeps, gradient
//! checks and figure presets, written as CSV and SVG.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
