use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interval endpoint {0} is a root; perturb the endpoint before counting")]
    EndpointIsRoot(String),

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: String, hi: String },

    #[error("p_{m} has {count} positive roots, expected exactly one")]
    RootCountNotOne { m: u64, count: usize },

    #[error("Sturm chain of p_{m} has {len} elements, expected 9")]
    ChainTooShort { m: u64, len: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("t = {t} lies within {eps} of the cone angle")]
    AtPole { t: f64, eps: f64 },

    #[error("gamma = {gamma} is outside (0, 1 - 1/(m + alpha))")]
    NotBelowOne { gamma: f64 },

    #[error("solution left the barrier funnel at t = {t} (w = {w}, barriers [{lower}, {upper}])")]
    BarrierEscape {
        t: f64,
        w: f64,
        lower: f64,
        upper: f64,
    },

    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("query angle {angle} lies within {eps} of the cone angle")]
    AngleNearCone { angle: f64, eps: f64 },

    #[error("cannot parse {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
