use thiserror::Error;

/// Errors raised by graph construction, operator algebra and the walk engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{family} requires {requirement}, got n = {n}")]
    InvalidSize {
        family: &'static str,
        requirement: &'static str,
        n: usize,
    },

    #[error("matrix is not Hermitian: max |M - M^H| = {defect:e} exceeds {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("eigendecomposition did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("initial state is not normalized: sum |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
