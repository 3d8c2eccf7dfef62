use thiserror::Error;

/// Errors raised by the analytic model, the optimizer, and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("no feasible (M, K) pair in the searched range")]
    EmptyFeasibleSet,

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("singular precoder: {0}")]
    SingularPrecoder(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
