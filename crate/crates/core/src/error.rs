use thiserror::Error;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("feature has no finite values")]
    EmptyFeature,
    #[error("feature is constant")]
    ConstantFeature,
    #[error("interquartile range is zero")]
    DegenerateSpread,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("no plottable features")]
    NoPlottableFeatures,
    #[error("invalid range: low {low} must be below high {high}")]
    BadRange { low: f64, high: f64 },
    #[error("invalid specification: {0}")]
    BadSpec(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("invalid plot model: {0}")]
    InvalidModel(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
