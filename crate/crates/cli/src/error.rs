use polycoreset::Error as CoreError;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_ITERATION_LIMIT: u8 = 4;
pub const EXIT_UNVERIFIED: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("{input}:{line}: {message}")]
    Parse {
        input: String,
        line: u64,
        message: String,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) | CliError::Parse { .. } | CliError::Io { .. } => EXIT_INVALID,
            CliError::Core(e) => match e {
                CoreError::OriginInsideHull | CoreError::NotSeparable => EXIT_INFEASIBLE,
                CoreError::IterationLimit { .. } => EXIT_ITERATION_LIMIT,
                _ => EXIT_INVALID,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io {
            path: "<output>".into(),
            message: e.to_string(),
        }
    }
}
