use thiserror::Error;

/// Errors surfaced by the library. The CLI maps these onto distinct exit
/// codes, so the variants are coarse by design.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument or malformed in-memory input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Malformed file contents; carries the 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A configured resource ceiling was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The gadget layout engine could not place something collision-free.
    #[error("layout error: {0}")]
    Layout(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn layout(msg: impl Into<String>) -> Self {
        Error::Layout(msg.into())
    }
}
