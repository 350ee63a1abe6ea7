use thiserror::Error;

/// Errors raised by mesh handling, discretisation and solvers.
#[derive(Debug, Error)]
pub enum HhoError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid mesh: {0}")]
    Validation(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("edge {edge} is not incident to cell {cell}")]
    NotIncident { cell: usize, edge: usize },

    #[error("tensor is not symmetric positive definite: {0}")]
    NotSpd(String),

    #[error("singular local system: {0}")]
    SingularLocal(String),

    #[error("linear solver failure: {0}")]
    Solver(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HhoError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        HhoError::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, HhoError>;
