use thiserror::Error;

/// Crate-wide error type.
///
/// Numerical routines in this crate fail for a small number of reasons:
/// arguments outside a documented range, iterations that do not converge,
/// ill-shaped matrices, or a basis that cannot represent the requested
/// eigenfunctions.  One enum keeps call sites uniform; the payload strings
/// carry the offending values.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside a function's supported range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input (sizes, signs, NaN, malformed flags).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative solver exhausted its iteration budget.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// A matrix violated a structural precondition (symmetry, dimension).
    #[error("matrix error: {0}")]
    Matrix(String),

    /// The scaled Laguerre basis cannot represent the requested
    /// eigenfunctions at the requested accuracy.
    #[error("basis failure: {0}")]
    BasisQuality(String),

    /// A computed quantity failed an internal consistency check.
    #[error("computation error: {0}")]
    Numerical(String),

    /// Beam grid or propagation precondition violated.
    #[error("beam error: {0}")]
    Beam(String),

    /// File I/O failure (CLI output paths).
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON serialization failure (CLI output).
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
