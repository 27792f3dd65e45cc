use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] heralded_cat::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("verification failed: {}", .0.join(", "))]
    VerificationFailed(Vec<String>),
}

impl CliError {
    /// 0 success, 1 failed verification or i/o, 2 configuration,
    /// 3 zero-probability event, 4 numerical failure.
    pub fn exit_code(&self) -> i32 {
        use heralded_cat::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::Domain(_) | E::Range(_)) => 2,
            CliError::Core(E::ZeroProbability(_)) => 3,
            CliError::Core(E::Numerical(_)) => 4,
            CliError::Io(_) | CliError::Json(_) | CliError::VerificationFailed(_) => 1,
        }
    }
}
