use std::path::PathBuf;

/// Failures of a command, grouped by the exit status they map to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration: unparsable values, singular or ineligible curves, field caps.
    #[error("configuration error: {0}")]
    Config(String),
    /// An exact identity of the descent failed.
    #[error("identity violated: {0}")]
    Identity(String),
    #[error("{0}")]
    Core(#[from] tamagawa_core::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for a violated identity, 2 for configuration problems, 3 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Identity(_) | CliError::Core(tamagawa_core::Error::Inconsistent(_)) => 1,
            CliError::Config(_) => 2,
            CliError::Core(e) if is_config_error(e) => 2,
            _ => 3,
        }
    }
}

fn is_config_error(e: &tamagawa_core::Error) -> bool {
    use tamagawa_core::Error::*;
    matches!(
        e,
        SingularCurve { .. } | InvalidField(_) | FieldTooLarge(_) | BoundTooSmall { .. } | NoSuchPrimeIdeal { .. } | InvalidDivisor | NotPrime(_)
    )
}

pub type CliResult<T> = Result<T, CliError>;
