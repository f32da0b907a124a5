use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("matrix is singular within tolerance")]
    SingularInput,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("element is not semisimple{}", generator_suffix(*.generator))]
    NotSemisimple { generator: Option<usize> },

    #[error("zero eigenvalue or coordinate: input is not invertible")]
    ZeroEigenvalue,

    #[error("torus coordinate ({row}, {col}) is zero")]
    ZeroCoordinate { row: usize, col: usize },

    #[error("retraction time {0} is outside [0, 1]")]
    InvalidTime(f64),

    #[error("tolerance `{0}` must be strictly positive and finite")]
    InvalidTolerance(&'static str),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("tuple is not simultaneously diagonalizable: {0}")]
    NotSimultaneouslyDiagonalizable(String),

    #[error("operation not supported for family {0}")]
    UnsupportedFamily(String),

    #[error("input `{0}` is not polystable")]
    NotPolystable(&'static str),

    #[error("no limit: generator {generator} entry ({row}, {col}) has magnitude {magnitude:e}")]
    NoLimit {
        generator: usize,
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("invalid group description: {0}")]
    InvalidGroup(String),

    #[error("empty group: no central torus and no simple factors")]
    EmptyGroup,

    #[error("size limit exceeded: {what} = {value} > {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("non-integral averaged coefficient in degree {degree}: {value}")]
    IntegralityFailure { degree: usize, value: String },

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

fn generator_suffix(generator: Option<usize>) -> String {
    match generator {
        Some(i) => format!(" (generator {i})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
