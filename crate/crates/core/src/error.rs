use thiserror::Error;

/// Errors produced by the model, inference and metric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state mask {mask:#b} has bits set beyond the {n} components")]
    InvalidState { mask: u32, n: usize },

    #[error("dimension mismatch: expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("component index {index} out of range for {n} components")]
    ComponentIndex { index: usize, n: usize },

    #[error("{0}")]
    InvalidStructure(String),

    #[error("{0}")]
    InvalidDistribution(String),

    #[error("{0}")]
    InvalidParameter(String),

    #[error("conditioning on an event of zero probability")]
    ZeroProbabilityEvidence,

    #[error("observation of component {component} is degenerate (alarm probability {alarm_prob})")]
    DegenerateObservation { component: usize, alarm_prob: f64 },

    #[error("posterior intervals have different priors ({a} vs {b})")]
    Incomparable { a: f64, b: f64 },

    #[error(
        "{n} components exceeds the exact-analysis cap of {cap}; \
         raise the cap or use the Monte Carlo estimators"
    )]
    SizeCap { n: usize, cap: usize },

    #[error("infeasible joint: p1={p1}, p2={p2}, rho={rho} violates the Frechet bounds")]
    InfeasibleCorrelation { p1: f64, p2: f64, rho: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
