use thiserror::Error;

/// Errors surfaced by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid parameter: {0}")]
    Param(String),

    /// An operator or state could not be constructed as requested.
    #[error("construction error: {0}")]
    Build(String),

    /// Matrix-logarithm eigenphase too close to the ±π branch cut.
    #[error("branch ambiguity in generator extraction: {0}")]
    BranchAmbiguity(String),

    /// A runtime numerical invariant was violated.
    #[error("numerical invariant violated: {0}")]
    Numeric(String),

    /// Configuration file or override could not be parsed/validated.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
