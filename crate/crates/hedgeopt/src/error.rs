//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the surrogate, the acquisition
/// layer, the portfolio loop, and the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A point, parameter vector, or dataset entry has the wrong dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An argument violates a documented precondition (non-finite value,
    /// empty input, parameter out of range, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Linear algebra gave up: a Gram or covariance matrix stayed
    /// non-positive-definite through the whole jitter ladder, or a
    /// predictive variance came out implausibly negative.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Thompson sampling is a set-level procedure — it has no pointwise
    /// acquisition value and cannot be dispatched like the closed-form
    /// criteria.
    #[error(
        "Thompson sampling has no pointwise acquisition value; \
         use the dedicated posterior-sample proposal instead"
    )]
    UnsupportedDispatch,

    /// A benchmark function was evaluated outside its box domain.
    #[error("point {point:?} is outside the domain of {function}")]
    OutOfDomain { function: String, point: Vec<f64> },

    /// The gap metric is undefined when the first sample already sits at
    /// the optimum value.
    #[error("degenerate start: optimum equals the first sample value ({value})")]
    DegenerateStart { value: f64 },

    /// The black-box objective returned NaN or infinity.
    #[error("objective returned non-finite value {value} at {point:?}")]
    NonFiniteObjective { point: Vec<f64>, value: f64 },

    /// A configuration file, CLI flag, or experiment setting is malformed.
    #[error("config error: {0}")]
    Config(String),

    /// Aggregation was asked to summarize a record with no successful trials.
    #[error("nothing to aggregate: 0 successful trials ({failed} failed)")]
    EmptyAggregate { failed: usize },

    /// A file read or write failed.
    #[error("I/O failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Helper used by the benchmark binary: configuration problems exit
    /// with status 1, everything else (numerical trouble, I/O, evaluation
    /// failures) with status 2.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}
