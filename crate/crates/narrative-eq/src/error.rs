use thiserror::Error;

/// Error type shared by the whole crate.
///
/// The CLI maps variants onto exit codes: input/parse problems exit 2,
/// resource caps exit 3 and contract violations exit 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("degenerate case: {0}")]
    Degenerate(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl Error {
    /// Process exit code for the CLI surface.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Parse(_) | Error::Degenerate(_) | Error::Numeric(_) => 2,
            Error::Resource(_) => 3,
            Error::Contract(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
