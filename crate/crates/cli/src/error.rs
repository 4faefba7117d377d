use std::fmt;

/// Failure classes of a command, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Out-of-range or inconsistent flags (exit 2).
    Usage(String),
    /// Numerical-validity failure such as leakage or a projection residual (exit 3).
    Numerical(String),
    /// Anything else, mostly I/O (exit 1).
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Other(m) => m,
        };
        // diagnostics stay on one line
        f.write_str(&msg.replace('\n', " "))
    }
}

impl From<polypulse::Error> for CliError {
    fn from(e: polypulse::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}
