use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Parse(Box<toml::de::Error>),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Core(#[from] spinorbit_core::Error),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for configuration problems, 3 for truncation, 4 for I/O.
    pub fn exit_code(&self) -> u8 {
        use spinorbit_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Config { .. } => 2,
            CliError::Core(E::InvalidParameter { .. }) => 2,
            CliError::Core(
                E::Truncation { .. } | E::CutoffTooSmall { .. } | E::DimensionGuard { .. },
            ) => 3,
            CliError::Core(_) => 1,
            CliError::Io { .. } => 4,
        }
    }
}
