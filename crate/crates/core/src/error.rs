use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("unsupported sphere dimension m = {0}")]
    UnsupportedDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot normalize a (near-)zero vector, |v| = {0:e}")]
    ZeroVector(f64),

    #[error("stereographic chart is singular at the south pole")]
    ChartPole,

    #[error("bubble count {count} exceeds packing capacity {capacity} of the center layout")]
    PackingCapacity { count: usize, capacity: usize },

    #[error("{value:?} is not a regular value: preimage with |det| = {det:e} below tolerance")]
    NonRegularValue { value: Vec<f64>, det: f64 },

    #[error("invariant inconclusive: raw = {raw}, residual = {residual} >= 0.5 ({hint})")]
    Inconclusive { raw: f64, residual: f64, hint: String },

    #[error("field support leaks out of the box: tail mass {tail:e} exceeds {limit:e}")]
    TailMass { tail: f64, limit: f64 },

    #[error("fiber extraction failed: {0}")]
    FiberExtraction(String),

    #[error("regression needs at least {needed} family members, got {got}")]
    TooFewMembers { needed: usize, got: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
