use thiserror::Error;

use crate::instance::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("served count {served} exceeds floor(N/k) = {cap}")]
    InfeasibleServedCount { served: usize, cap: usize },

    #[error("solver {solver} does not apply: {reason}")]
    SolverNotApplicable { solver: &'static str, reason: String },

    #[error("{what} supports at most {limit}, got {got}")]
    TooLarge { what: &'static str, limit: usize, got: usize },

    #[error("malformed document: {0}")]
    Document(String),
}
