use thiserror::Error;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_SCHEMA: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// Already rendered by clap, including its own `error:` prefix.
    #[error("{0}")]
    Arguments(String),
    #[error("{0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal guard: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Arguments(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Schema(_) => EXIT_SCHEMA,
            CliError::Verification(_) => EXIT_VERIFICATION,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn schema(err: impl std::fmt::Display) -> Self {
        CliError::Schema(err.to_string())
    }
}

impl From<toroid_core::Error> for CliError {
    fn from(err: toroid_core::Error) -> Self {
        use toroid_core::Error as E;
        let text = err.to_string();
        match err {
            E::Parameter(_) | E::EvenArity(_) | E::DimensionOutOfRange { .. } | E::IndexOutOfRange { .. } => {
                CliError::Usage(text)
            }
            E::BadProcess(_) | E::TopologyMismatch | E::NonCancellingCycle | E::Parse(_) => CliError::Schema(text),
            E::EventCap(_) | E::Solver(_) | E::Internal(_) => CliError::Internal(text),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}
