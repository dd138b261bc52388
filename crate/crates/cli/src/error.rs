use thiserror::Error;

/// Process exit code for configuration and validation failures.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit code for numerical failures.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("reading {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] nhqc_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Read { .. } => EXIT_CONFIG,
            Self::Core(nhqc_core::Error::InvalidArgument(_)) => EXIT_CONFIG,
            Self::Core(_) => EXIT_NUMERICAL,
            Self::Io(_) | Self::Csv(_) | Self::Json(_) => 1,
        }
    }
}

impl From<toml::de::Error> for CliError {
    fn from(e: toml::de::Error) -> Self {
        Self::Config(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
