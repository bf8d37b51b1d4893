use thiserror::Error;

/// Errors produced by the collocation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("matrix is singular to working precision at column {column}")]
    Singular { column: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown example id `{0}` (valid ids: 1, 2, 3, 4, 5a, 5b)")]
    UnknownExample(String),

    #[error("problem file line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("problem has no exact solution")]
    NoExactSolution,

    #[error("exact solution is identically zero at the sampled nodes")]
    ZeroReference,

    #[error("solve failed at order {order}: {source}")]
    AtOrder {
        order: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
