use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has {found} entries, expected {dim}x{dim}")]
    Shape { dim: usize, found: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |A - A^dag| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix has no eigenvalue above the rank cutoff")]
    ZeroMatrix,

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("prior {index}: {reason}")]
    BadPrior { index: usize, reason: String },

    #[error("state {index}: {reason}")]
    BadState { index: usize, reason: String },

    #[error("POVM element {index}: {reason}")]
    BadPovm { index: usize, reason: String },

    #[error("expected {expected} operators, found {found}")]
    WrongArity { expected: usize, found: usize },

    #[error("states {i} and {j} do not commute (|[rho_i, rho_j]| = {defect:e})")]
    NotCommuting { i: usize, j: usize, defect: f64 },

    #[error(
        "certificate failed (hermiticity defect {hermiticity_defect:e}, min margin {min_margin:e})"
    )]
    CertificateFailed {
        hermiticity_defect: f64,
        min_margin: f64,
    },

    #[error("POVM is not unambiguous: Tr(Pi_{i} rho_{j}) = {value:e}")]
    NotUnambiguous { i: usize, j: usize, value: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
