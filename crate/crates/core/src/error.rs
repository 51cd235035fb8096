use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("{qubits} qubits exceeds the dense cutoff of {max}")]
    DenseCutoff { qubits: usize, max: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("mode {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("overlap matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("Gram-Schmidt pivot {pivot:e} at orbital {index} is below tolerance")]
    DegeneratePivot { index: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("state annihilated: success probability {probability:e}")]
    Annihilated { probability: f64 },

    #[error("expansion exceeded {budget} terms at order {order} ({terms} terms)")]
    TermBudget {
        order: usize,
        terms: usize,
        budget: usize,
    },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid {key}: {message}")]
    InvalidConfig { key: String, message: String },

    #[error("decode window: {0}")]
    DecodeWindow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            key: key.into(),
            message: message.into(),
        }
    }
}
