use thiserror::Error;

/// Errors surfaced by configuration parsing and the experiment runner.
/// Numeric-core contract violations panic instead; they indicate bugs, not
/// bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("{path}:{line}: {msg}")]
    HamiltonianParse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
