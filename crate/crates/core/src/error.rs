use alloc::string::String;
use core::fmt;

use crate::graph::ValidationReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The graph violates one of the signed digraph invariants.
    InvalidGraph(ValidationReport),
    /// A gauge transformation was requested for a structurally unbalanced graph.
    StructurallyUnbalanced,
    /// The graph neither contains a directed spanning tree nor satisfies the
    /// multiple-leader hypothesis.
    AssumptionViolated,
    /// A matrix or vector had a NaN or infinite entry.
    NonFinite(&'static str),
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    /// The smallest nonzero eigenvalue of the edge Laplacian is too close to
    /// zero to separate the zero eigenspace reliably.
    SpectralGap { gap: f64, threshold: f64 },
    /// The zero eigenvalue has Jordan blocks larger than 2x2.
    NilpotencyIndex { rank_sq: usize, rank_cube: usize },
    NotSymmetricPositiveDefinite,
    NonPositiveAlpha { index: usize, value: f64 },
    /// The shifted operator still has an eigenvalue with real part at or
    /// below the tolerance.
    ShiftedOperatorUnstable { min_real: f64 },
    Singular(&'static str),
    /// The integrator produced a non-finite state.
    NonFiniteState { time: f64 },
    InvalidConfig(String),
    Infeasible(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGraph(report) => write!(f, "invalid graph: {report}"),
            Error::StructurallyUnbalanced => f.write_str("structurally unbalanced graph"),
            Error::AssumptionViolated => f.write_str(
                "graph has neither a directed spanning tree nor multiple leader groups reaching every follower",
            ),
            Error::NonFinite(what) => write!(f, "non-finite entries in {what}"),
            Error::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "dimension mismatch for {what}: expected {expected}, found {found}"),
            Error::SpectralGap { gap, threshold } => write!(
                f,
                "smallest nonzero eigenvalue magnitude {gap:e} is below the separation threshold {threshold:e}"
            ),
            Error::NilpotencyIndex { rank_sq, rank_cube } => write!(
                f,
                "zero eigenvalue has Jordan blocks larger than two (rank of square {rank_sq}, rank of cube {rank_cube})"
            ),
            Error::NotSymmetricPositiveDefinite => {
                f.write_str("matrix is not symmetric positive definite")
            }
            Error::NonPositiveAlpha { index, value } => {
                write!(f, "alpha[{index}] = {value} must be positive")
            }
            Error::ShiftedOperatorUnstable { min_real } => write!(
                f,
                "shifted edge Laplacian has an eigenvalue with real part {min_real:e}"
            ),
            Error::Singular(what) => write!(f, "singular matrix in {what}"),
            Error::NonFiniteState { time } => write!(f, "non-finite state at t = {time}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible parameters: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
