use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} needs {requested} entries, exceeding the size cap of {cap}")]
    SizeCap {
        what: String,
        requested: u128,
        cap: usize,
    },

    #[error("symmetrizer arity {arity} exceeds the cap of {cap}")]
    ArityCap { arity: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("derivative of order {needed} required, but only orders up to {available} are available")]
    MissingOrder { needed: usize, available: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    /// True for the resource-limit family (size, dense and arity caps).
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::SizeCap { .. } | Error::ArityCap { .. })
    }
}
