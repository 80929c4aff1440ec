use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("io: {0}")]
    Io(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] dgforge_core::Error),
}

impl CliError {
    pub fn context(self, what: &str) -> Self {
        match self {
            CliError::Io(m) => CliError::Io(format!("{what}: {m}")),
            CliError::Schema(m) => CliError::Schema(format!("{what}: {m}")),
            CliError::Usage(m) => CliError::Usage(format!("{what}: {m}")),
            e => e,
        }
    }

    /// 1 for unreadable or malformed input, 2 for inputs that violate a precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Schema(_) | CliError::Usage(_) => 1,
            CliError::Core(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        use dgforge_core::Error as E;
        match self {
            CliError::Io(_) => "io",
            CliError::Schema(_) => "schema",
            CliError::Usage(_) => "usage",
            CliError::Core(E::NotClassP(_)) => "class_p_required",
            CliError::Core(E::Certificate(_)) => "certificate",
            CliError::Core(_) => "precondition",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}
