//! File formats, the analysis pipeline and the `edgesync` command surface.

pub mod commands;
pub mod error;
pub mod format;
pub mod pipeline;
pub mod report;

pub use error::{CliError, Result};
