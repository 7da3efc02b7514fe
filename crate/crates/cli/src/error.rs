use std::fmt;

/// CLI failure with its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Usage or configuration problem (exit 2).
    Config(String),
    /// Unstable system or invalid regime (exit 3).
    Unstable(String),
    /// A validation invariant failed (exit 1).
    Validation(String),
    /// A figure cross-check exceeded its tolerance (exit 4).
    Oracle(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Unstable(_) => 3,
            CliError::Oracle(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Unstable(m) => write!(f, "unstable or invalid regime: {m}"),
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
            CliError::Oracle(m) => write!(f, "oracle mismatch: {m}"),
        }
    }
}

impl From<optomech::Error> for CliError {
    fn from(e: optomech::Error) -> Self {
        use optomech::Error as E;
        match e {
            E::InvalidParams(_) | E::InvalidCovariance(_) | E::CorrelatedBathUnsupported => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Unstable(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
