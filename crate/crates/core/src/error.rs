use thiserror::Error;

/// Errors raised by constructors, loaders and measures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("keep set must be non-empty and free of duplicates")]
    InvalidKeepSet,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has eigenvalue {min_eigenvalue:.3e} below the PSD threshold")]
    NotPositive { min_eigenvalue: f64 },

    /// A state failed one of its named invariants (`norm`, `hermiticity`, `trace`, `positivity`, ...).
    #[error("state invariant violated: {invariant} ({detail})")]
    Invariant { invariant: &'static str, detail: String },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("unknown state name: {0}")]
    UnknownState(String),

    #[error("malformed bitstring: {0}")]
    MalformedBitstring(String),

    #[error("state file parse error: {0}")]
    Parse(String),

    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
