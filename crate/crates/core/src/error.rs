use thiserror::Error;

/// Errors surfaced by the engine, grouped by how the CLI maps them to exit
/// codes: validation (1), numerical singularity (2), property violation (3).
#[derive(Debug, Error)]
pub enum Error {
    /// Structural or domain validation failed (bad shapes, negativity, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A numerical precondition failed (singular operator, non-faithful
    /// state where faithfulness is required, eigenvalue at or below the
    /// positivity floor).
    #[error("singularity error: {0}")]
    Singular(String),

    /// An internal consistency identity failed beyond tolerance.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
    pub fn singular(msg: impl Into<String>) -> Self {
        Error::Singular(msg.into())
    }
    pub fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }
}
