use thiserror::Error;

/// Failure of a CLI run, carrying the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("infeasible scenario: {0}")]
    Infeasible(String),

    /// A verified execution broke a delay bound. This is a library bug.
    #[error("delay bound violated on a verified execution: {0}")]
    BoundViolation(String),

    /// A user-supplied trace failed a verifier, so nothing was simulated.
    #[error("input trace rejected: {0}")]
    Gate(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::BoundViolation(_) => 4,
            CliError::Gate(_) => 5,
            CliError::Internal(_) | CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

impl From<ncdelay_core::Error> for CliError {
    fn from(e: ncdelay_core::Error) -> Self {
        match e {
            ncdelay_core::Error::Infeasible(msg) => CliError::Infeasible(msg),
            ncdelay_core::Error::Construction(msg) => CliError::Internal(msg),
            other => CliError::Config(other.to_string()),
        }
    }
}
