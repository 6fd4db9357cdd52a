//! Error type shared by every module in the crate.

use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants are deliberately specific so callers (and the CLI) can map them
/// to actionable messages without string matching.
#[derive(Debug, Error)]
pub enum Error {
    /// Bernoulli polynomial order outside the supported range, or a spline
    /// order `m` whose kernel would need such a polynomial.
    #[error("unsupported order {order}: supported range is {min}..={max}")]
    UnsupportedOrder { order: u32, min: u32, max: u32 },

    /// A smoothing penalty that is not strictly positive.
    #[error("invalid penalty lambda = {lambda}: must be strictly positive and finite")]
    InvalidPenalty { lambda: f64 },

    /// Too few observations for the requested operation.
    #[error("too few points: got n = {n}, need at least {min}")]
    TooFewPoints { n: usize, min: usize },

    /// Two sequences (or a fit and a target) that must share a length do not.
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Two fits that must share (n, m, lambda) do not.
    #[error("mismatched fits: {detail}")]
    MismatchedFits { detail: String },

    /// Data whose range is a single point cannot define range-based thresholds.
    #[error("degenerate range: all observations equal {value}")]
    DegenerateRange { value: f64 },

    /// All quantized values identical: the empirical variance is zero and the
    /// standardized test statistic is undefined.
    #[error("degenerate variance: all quantized values are identical, the test is undefined")]
    DegenerateVariance,

    /// Quantizer construction with non-increasing thresholds or mismatched
    /// mark count.
    #[error("invalid quantizer: {detail}")]
    InvalidQuantizer { detail: String },

    /// A rejection level outside (0, 1).
    #[error("invalid level alpha = {alpha}: must lie strictly between 0 and 1")]
    InvalidAlpha { alpha: f64 },

    /// A noise scale that is not strictly positive.
    #[error("invalid noise scale sigma = {sigma}: must be strictly positive")]
    InvalidSigma { sigma: f64 },

    /// Bad experiment or tuning configuration (empty grid, odd n, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// CSV/JSON serialization problems from the simulation writers.
    #[error("output error: {0}")]
    Output(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Output(e.to_string())
    }
}
