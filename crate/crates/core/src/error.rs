use thiserror::Error;

/// Errors raised by the library. CLI exit codes are assigned in `cli`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for matrix of order {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("pair ({0}, {0}) is not a pair of distinct indices")]
    RepeatedIndex(usize),

    #[error("operation needs a matrix of order at least {needed}, got {n}")]
    OrderTooSmall { needed: usize, n: usize },

    #[error("malformed matrix JSON: {0}")]
    Syntax(String),

    #[error("matrix dimensions: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("oracle limit: order {n} exceeds {limit}")]
    OracleLimit { n: usize, limit: usize },

    #[error("polynomial of degree 0 has no roots")]
    ConstantPolynomial,

    #[error("no well-conditioned similarity transform after {attempts} draws")]
    IllConditioned { attempts: usize },

    #[error("invalid bounding box: {0}")]
    InvalidBox(String),

    #[error("grid geometry mismatch: {0}")]
    GeometryMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
