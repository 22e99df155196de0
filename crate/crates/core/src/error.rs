use num_complex::Complex64;
use thiserror::Error;

/// Errors raised across the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("winding undefined: |value| = {modulus:e} at grid index {index} is below tolerance {tolerance:e}")]
    WindingUndefined {
        index: usize,
        modulus: f64,
        tolerance: f64,
    },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ambiguous root classification at {root}: deflation raised tail residual to {residual:e}")]
    AmbiguousRoot { root: Complex64, residual: f64 },

    #[error("conditioning error: {0}")]
    Conditioning(String),

    #[error("alpha search exhausted after {tried} candidates (best min modulus {best_min_modulus:e}, best winding {best_winding:?})")]
    SearchExhausted {
        tried: usize,
        best_min_modulus: f64,
        best_winding: Option<i64>,
    },

    #[error("zero-free completion failed: {0}")]
    Completion(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
