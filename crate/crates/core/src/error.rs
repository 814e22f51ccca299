use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config schema violation: {0}")]
    Schema(String),

    /// A structural invariant of the field or unit data does not hold.
    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error("elements belong to different fields")]
    FieldMismatch,

    #[error("operation undefined on the zero element")]
    ZeroElement,

    #[error("element is not integral")]
    NotIntegral,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A numerical decision could not be made at the working precision.
    #[error("precision {precision} bits insufficient: {detail}")]
    Precision { precision: u32, detail: String },

    #[error("log vector not in ker Σ: Σ = {sum:e} exceeds bound {bound:e}")]
    NotNormOne { sum: f64, bound: f64 },

    #[error("search box of {volume:.3e} points exceeds the budget of {budget:.3e}")]
    Resource { volume: f64, budget: f64 },

    #[error("no unit system available for this field")]
    MissingUnits,

    #[error("empty report")]
    EmptyReport,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant,
            detail: detail.into(),
        }
    }
}
