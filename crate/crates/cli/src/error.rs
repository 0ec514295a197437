use serde_json::json;
use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Core(#[from] fraclab_core::Error),

    /// Outputs were written but a statistical check failed.
    #[error("acceptance failed: {0}")]
    Acceptance(String),

    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },

    #[error("cannot start {threads} worker threads: {message}")]
    Threads { threads: usize, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use fraclab_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            // Parameter problems surfacing from the library are still config errors.
            CliError::Core(E::InvalidParameter(_) | E::ShapeMismatch { .. } | E::Parse { .. }) => 2,
            CliError::Core(_) => 3,
            CliError::Acceptance(_) => 4,
            CliError::Output { .. } | CliError::Threads { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            3 => "numeric",
            4 => "acceptance",
            _ => "output",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() })
    }
}
