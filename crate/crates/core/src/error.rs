use thiserror::Error;

use crate::solvers::ThetaResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("event does not belong to this scenario: {0}")]
    MismatchedScenario(String),

    #[error("duplicate event {0}")]
    DuplicateEvent(String),

    #[error("vertex index {index} out of range for graph with {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The instance is larger than the exhaustive routine is allowed to handle.
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    /// A decision procedure refused to answer rather than guess.
    #[error("undecided: {0}")]
    Undecided(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("polytope is unbounded")]
    UnboundedPolytope,

    #[error("simplex exceeded its iteration bound ({0})")]
    IterationLimit(usize),

    #[error("theta solver did not converge (best gap {:.3e})", best.gap)]
    NonConvergence { best: Box<ThetaResult> },

    #[error("state is not normalized (squared norm {0})")]
    UnnormalizedState(f64),

    #[error("event {0} is missing from the behavior")]
    MissingEvent(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
