use thiserror::Error;

/// Errors raised by model construction and the theorem operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: out-of-range indices, wrong lengths, unparsable values.
    #[error("input error: {0}")]
    Input(String),

    #[error("model spec mismatch: {left} vs {right}")]
    SpecMismatch { left: String, right: String },

    /// An operation was called outside its documented domain.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The requested check is not meaningful for this kind of model.
    #[error("unsupported model: {0}")]
    Unsupported(String),

    /// Internal consistency failure; indicates the input violated an
    /// assumption the caller was supposed to have checked.
    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
