use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational {0:?}: expected \"p/q\" or an integer")]
    MalformedRational(String),

    #[error("model mismatch: expected Picard rank {expected}, got a vector of length {found}")]
    ModelMismatch { expected: usize, found: usize },

    #[error("invalid surface model: {0}")]
    InvalidModel(String),

    #[error("invalid polarization: {0}")]
    InvalidPolarization(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("slope undefined: rank (ch0) is zero")]
    UndefinedSlope,

    #[error("infeasible scenario: {0}")]
    InfeasibleScenario(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("internal invariant breach: {0}")]
    InvariantBreach(String),
}

impl Error {
    /// Process exit code used by the command-line front end and the C API.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::HypothesisViolation(_) => 2,
            Error::InvariantBreach(_) => 3,
            _ => 1,
        }
    }
}
