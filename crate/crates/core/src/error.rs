use thiserror::Error;

/// Errors raised by the simulator, the protocol driver and the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    IndexOutOfRange { index: usize, num_qubits: usize },

    #[error("zero-probability branch: {0}")]
    ZeroProbabilityBranch(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
