use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),

    #[error("{field} (line {line}): {message}")]
    Config { field: String, line: usize, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error("numerical contract violated: {0}")]
    Numerical(#[from] weakval_core::Error),
}

impl CliError {
    /// 1 for I/O and validation failures, 2 for numerical contract violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
