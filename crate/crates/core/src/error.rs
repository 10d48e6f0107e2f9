use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    FileUnreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("series is empty or too short")]
    EmptySeries,
    #[error("too few observations: need {needed}, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("holdout {holdout} must be in 1..{len}")]
    HoldoutTooLarge { holdout: usize, len: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid model specification: {0}")]
    InvalidSpec(String),
    #[error("series too short: need more than {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("log-likelihood is not finite")]
    NonFiniteLikelihood,
    #[error("model is not covariance stationary (persistence {0:.6})")]
    NonStationary(f64),
    #[error("optimization failed: {0}")]
    OptimizationFailed(String),
    #[error("every grid cell failed to fit")]
    AllCellsFailed,
    #[error("insufficient forecast state: {0}")]
    InvalidState(String),
    #[error("no forecast origin produced a valid fit")]
    NoValidOrigins,
    #[error("invalid option inputs: {0}")]
    InvalidInputs(String),
    #[error("option price {price} outside no-arbitrage band ({lower}, {upper})")]
    PriceOutOfBand { price: f64, lower: f64, upper: f64 },
    #[error("root search did not converge")]
    NoConvergence,
    #[error("design matrix is singular (collinear regressors)")]
    SingularDesign,
    #[error("series are not aligned: {0}")]
    MisalignedSeries(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing inputs: {0}")]
    MissingInputs(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
