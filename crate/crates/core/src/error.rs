use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// An integral whose value is infinite (or not detectably finite).
    #[error("divergent integral: {what}")]
    Divergent { what: String },

    /// A structural admissibility condition on the measure failed.
    #[error("condition {condition} violated: {detail}")]
    ConditionViolated { condition: &'static str, detail: String },

    /// The density ratio vanished at an observed jump, so its logarithm is -inf.
    #[error("singular ratio: density ratio is zero at jump size {size}")]
    SingularRatio { size: f64 },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn divergent(what: impl Into<String>) -> Self {
        Error::Divergent { what: what.into() }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
