use std::fmt;

/// Failure of a CLI run, mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad input, flags or configuration (exit code 2).
    Validation(String),
    /// A computation failed to converge or produced a non-finite value
    /// (exit code 3).
    Numerical(String),
    /// Reading input or writing output failed (exit code 2).
    Io(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "invalid input: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<poolcore::Error> for CliError {
    fn from(e: poolcore::Error) -> Self {
        match e {
            poolcore::Error::Numerical(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
