//! Process-level error taxonomy: exit code 1 for configuration and usage
//! problems, exit code 2 for numerical or invariant failures at run time.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, bad flags, unusable input files. Exit code 1.
    Usage(String),
    /// The simulation itself violated an invariant or failed numerically.
    /// Exit code 2.
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<qdwell::Error> for CliError {
    fn from(e: qdwell::Error) -> Self {
        match e {
            qdwell::Error::Numerical { .. } | qdwell::Error::Resolution(_) => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
