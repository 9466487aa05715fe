//! Error type shared across the crate.

/// Errors produced by estimation, criteria, simulation and selection routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The predictor is identically zero over the training window.
    #[error("degenerate predictor: all x_t are zero over the training window")]
    DegeneratePredictor,

    /// A cross-covariance lag at or beyond the training length was requested.
    #[error("lag {lag} too large for training length {n_train}")]
    LagTooLarge { lag: usize, n_train: usize },

    /// The variability index needs exactly `h` cross-covariance matrices.
    #[error("expected {expected} cross-covariance matrices (s = 0..h-1), got {got}")]
    MismatchedLagCount { expected: usize, got: usize },

    /// Penalty exponent outside the open interval (0, 1).
    #[error("penalty exponent {0} outside (0, 1)")]
    ExponentOutOfRange(f64),

    /// AR coefficients violate the stationarity region.
    #[error("nonstationary AR parameters: {0}")]
    NonstationaryParameters(String),

    /// A parameter combination is invalid for the model at hand.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// The residual covariance estimate is singular (or not positive).
    #[error("singular residual covariance (det = {det})")]
    SingularCovariance { det: f64 },

    /// The lag-1 autocovariance is zero, so the closed-form b3 coefficient is undefined.
    #[error("gamma_w(1) = 0: closed-form variability index is singular")]
    ZeroGamma,

    /// Configuration file or flag values failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Input data failed validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Every candidate model failed to evaluate.
    #[error("all {0} candidate models failed to evaluate")]
    AllCandidatesFailed(usize),

    /// Strict parse failure (CSV or JSON inputs).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
