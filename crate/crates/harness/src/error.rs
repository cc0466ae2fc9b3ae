use thiserror::Error;

/// Harness failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config line {line}: {message}")]
    ConfigLine { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("state spec: {0}")]
    StateSpec(String),
    #[error(transparent)]
    Core(#[from] qwsearch::Error),
    #[error("invariant violated: {name}: {detail}")]
    Invariant { name: String, detail: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub fn invariant(name: impl Into<String>, detail: impl Into<String>) -> Self {
        HarnessError::Invariant { name: name.into(), detail: detail.into() }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), source }
    }

    /// 2 for bad configs and specs, 3 for invariant violations, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::ConfigLine { .. } | HarnessError::Config(_) | HarnessError::StateSpec(_) | HarnessError::Core(_) => 2,
            HarnessError::Invariant { .. } => 3,
            HarnessError::Io { .. } | HarnessError::Csv(_) | HarnessError::Json(_) => 1,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
