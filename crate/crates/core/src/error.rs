use thiserror::Error;

/// Errors produced by the simplex primitives, the engine and the benchmark objectives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Every coordinate other than `index` is at or below the sparsity threshold,
    /// so there is nothing to trade mass with.
    #[error("move undefined at coordinate {index}: no other significant coordinate")]
    MoveUndefined { index: usize },

    #[error("degenerate vector: no entry exceeds the sparsity threshold {lambda}")]
    DegenerateVector { lambda: f64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("invalid tuning parameters: {0}")]
    InvalidParams(String),

    #[error("objective returned non-finite value {value} at {point:?}")]
    NonFiniteObjective { value: f64, point: Vec<Vec<f64>> },

    #[error("unsupported benchmark variant: {0}")]
    UnsupportedVariant(String),

    #[error("unknown benchmark function `{0}`")]
    UnknownFunction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
