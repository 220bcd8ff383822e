use thiserror::Error;

/// Errors raised by distribution construction and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("conditional mean undefined: P(X > 0) = 0")]
    UndefinedConditional,

    #[error("unsupported distribution: {0}")]
    Unsupported(String),

    #[error("instance shape: {0}")]
    InstanceShape(String),

    #[error("instance of size {n} exceeds the limit of {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("uniform supports do not form a nested chain")]
    NotNested,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
