use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("unphysical input: {0}")]
    Unphysical(String),
    #[error("reproduction mismatch: {0}")]
    Mismatch(String),
    #[error("oracle cutoff escalation failed: {0}")]
    Escalation(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 2 invalid input, 3 reproduction mismatch, 4 oracle
    /// escalation failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Unphysical(_) => 2,
            CliError::Mismatch(_) => 3,
            CliError::Escalation(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<cvrealign_core::Error> for CliError {
    fn from(e: cvrealign_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<cvrealign_fock::FockError> for CliError {
    fn from(e: cvrealign_fock::FockError) -> Self {
        match e {
            cvrealign_fock::FockError::EscalationExhausted { .. }
            | cvrealign_fock::FockError::Truncation { .. } => CliError::Escalation(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
