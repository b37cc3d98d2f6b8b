use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("{function}: argument {value} outside domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A model or grid parameter violates its invariant.
    #[error("invalid `{field}` = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A combination of otherwise valid settings cannot be used together.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("state became non-finite at step {step}")]
    NonFiniteState { step: usize },

    #[error("{function}: could not reach tolerance {tolerance:e} at {value}")]
    Convergence {
        function: &'static str,
        value: f64,
        tolerance: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal numeric failure: {0}")]
    Internal(String),
}
