use std::path::PathBuf;

use edgesync_core::graph::ValidationReport;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed graph document {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid graph {path}:\n{report}")]
    Invalid { path: PathBuf, report: ValidationReport },
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] edgesync_core::Error),
}

impl CliError {
    /// 2 for anything wrong with the input, 1 for numerical failures of the
    /// pipeline itself.
    pub fn exit_code(&self) -> u8 {
        use edgesync_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::InvalidGraph(_)
                | E::InvalidConfig(_)
                | E::DimensionMismatch { .. }
                | E::Infeasible(_)
                | E::NonPositiveAlpha { .. }
                | E::NotSymmetricPositiveDefinite
                | E::AssumptionViolated => 2,
                _ => 1,
            },
            _ => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
