//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by graph construction, simulation, optimization and the
/// benchmark harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A degree sequence that no simple graph can realize (n*d odd or d >= n).
    #[error("infeasible degree sequence: n={n}, d={d}")]
    InfeasibleDegreeSequence { n: usize, d: usize },

    /// Instance exceeds the exhaustive-enumeration guard.
    #[error("instance too large for oracle: n={n} exceeds guard {max}")]
    InstanceTooLarge { n: usize, max: usize },

    /// Qubit count exceeds the dense-statevector guard.
    #[error("state too large: n={n} qubits exceeds guard {max}")]
    StateTooLarge { n: usize, max: usize },

    /// Vector/assignment length does not match the expected dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Gate or layer references a qubit outside the register.
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    /// An invalid argument or configuration value, with the offending key path.
    #[error("invalid config: {key}: {message}")]
    InvalidConfig { key: String, message: String },

    /// Degenerate problem instance (e.g. ground energy zero).
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    /// I/O error annotated with the path being accessed.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed graph file or other parse failure.
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub fn invalid_config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
