use lsdlab_core::LsdError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lsd(#[from] LsdError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 0 ok, 1 i/o, 2 invalid configuration or failed precondition, 3 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lsd(e) if e.is_budget() => 3,
            CliError::Lsd(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}
