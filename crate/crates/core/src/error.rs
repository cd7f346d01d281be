use thiserror::Error;

/// Errors produced by the statistics, embedding, and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric at ({i}, {j}): {upper} vs {lower}")]
    NotSymmetric {
        i: usize,
        j: usize,
        upper: f64,
        lower: f64,
    },

    #[error("nonzero diagonal entry {value} at index {i}")]
    NonZeroDiagonal { i: usize, value: f64 },

    #[error("zero Bray-Curtis denominator for observation pair ({i}, {j})")]
    DegeneratePair { i: usize, j: usize },

    #[error("sample size {got} is too small, at least {needed} observations required")]
    Size { needed: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("Euclidean representation failed, relative residual {residual:e}")]
    Representation { residual: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("partial correlation undefined: a conditioning correlation has magnitude 1")]
    UndefinedPartial,

    #[error("CSV error at line {line}, column {column}: {message}")]
    Csv {
        line: u64,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by the numbers themselves rather than by how
    /// the caller invoked the library.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numeric(_)
                | Error::Representation { .. }
                | Error::Degenerate(_)
                | Error::UndefinedPartial
                | Error::DegeneratePair { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
