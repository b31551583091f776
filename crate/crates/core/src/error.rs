use thiserror::Error;

/// Errors produced by the simulator, estimators and pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter count mismatch: expected {expected}, got {got}")]
    ParameterCount { expected: usize, got: usize },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("numerical state error: {0}")]
    NumericalState(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("{qubits} qubits exceeds the capacity of {method} (max {max}); use a surrogate estimator")]
    Capacity {
        qubits: usize,
        max: usize,
        method: &'static str,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("stratification failure: {0}")]
    Stratification(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
