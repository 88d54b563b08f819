use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} entries, got {found}")]
    Shape { expected: usize, found: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian (deviation {deviation:e} > tolerance {tolerance:e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("state vector norm is {0}, expected 1")]
    NotNormalized(f64),

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("{qubits} qubits exceed the dense cap of dimension {cap}")]
    Capacity { qubits: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("argument declared pure is mixed (top eigenvalue {0})")]
    PurityMismatch(f64),

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("numerical consistency failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
