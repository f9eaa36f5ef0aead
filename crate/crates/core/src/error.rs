use thiserror::Error;

/// Errors raised by the discrimination toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("matrix function is undefined at retained eigenvalue {0:e}")]
    DomainError(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("{name} out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("states {0} and {1} are indistinguishable (|overlap| = {2})")]
    Indistinguishable(usize, usize, f64),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("Fock truncation level {level} exceeds cap {cap}")]
    TruncationOverflow { level: usize, cap: usize },

    #[error("unsupported ensemble: {0}")]
    UnsupportedEnsemble(String),

    #[error("table shape mismatch: {0} states vs {1} outcomes")]
    ShapeMismatch(usize, usize),

    #[error("not a density operator: {0}")]
    NotDensityOperator(String),

    #[error("invalid probability table: {0}")]
    InvalidTable(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
