use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("truncation deficit {deficit:e} at cutoff {cutoff} exceeds 1e-6; use a larger cutoff")]
    Truncation { deficit: f64, cutoff: usize },

    #[error("cutoff escalation exhausted: tail {tail:e} at cutoff {cutoff}")]
    EscalationExhausted { tail: f64, cutoff: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, FockError>;
