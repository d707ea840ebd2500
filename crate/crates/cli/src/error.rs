use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown theorem '{0}'")]
    UnknownTheorem(String),
    #[error("{theorem} is not supported on this context: {reason}")]
    ContextUnsupported { theorem: String, reason: String },
    #[error(transparent)]
    Core(#[from] chaingeo_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
