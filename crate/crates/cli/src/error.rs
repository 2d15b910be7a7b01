use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION_FAILURE: i32 = 1;
    pub const CONFIG_ERROR: i32 = 2;
    pub const NON_CONVERGENCE: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => exit::CONFIG_ERROR,
            CliError::Validation(_) => exit::VALIDATION_FAILURE,
            CliError::NonConvergence(_) => exit::NON_CONVERGENCE,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<twomode_core::Error> for CliError {
    fn from(e: twomode_core::Error) -> Self {
        use twomode_core::Error as E;
        match e {
            E::InvalidParams(_) | E::SqueezingDivergence | E::AmplitudeTooLarge { .. } => CliError::Config(e.to_string()),
            _ => CliError::NonConvergence(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
