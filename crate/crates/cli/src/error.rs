use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] parisian_ruin::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    /// A self-check failed.
    #[error("invariant failure: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Model(_) | CliError::Io(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}
