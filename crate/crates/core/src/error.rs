use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("grid parse error at line {line}: {message}")]
    GridParse { line: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("action {action} outside the action space of size {num_actions}")]
    InvalidAction { action: usize, num_actions: usize },
    #[error("snapshot belongs to instance {snapshot} but was restored into instance {target}")]
    SnapshotMismatch { snapshot: u64, target: u64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    /// The observed percept has probability zero under every hypothesis.
    #[error("percept is impossible under the whole model (xi(e) = 0)")]
    Inconsistent,
    #[error("every hypothesis has been falsified")]
    Exhausted,
    #[error(transparent)]
    Env(#[from] EnvError),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Run(Box<crate::harness::RunFailure>),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
