use std::fmt;
use std::path::Path;

use persona_core::Error as CoreError;

/// Failure classes with their process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Config,
    Io,
    Validation,
    Numerical,
}

impl Class {
    pub fn exit_code(self) -> i32 {
        match self {
            Class::Config => 2,
            Class::Io => 3,
            Class::Validation => 4,
            Class::Numerical => 5,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Class::Config => "config error",
            Class::Io => "io error",
            Class::Validation => "validation error",
            Class::Numerical => "numerical error",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub class: Class,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { class: Class::Config, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { class: Class::Io, message: message.into() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        CliError { class: Class::Validation, message: message.into() }
    }

    /// A pipeline artifact that an earlier command should have produced.
    pub fn missing_artifact(path: &Path, producer: &str) -> Self {
        CliError::io(format!("{} not found; run `persona {producer}` first", path.display()))
    }

    pub fn context(mut self, what: impl fmt::Display) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.class.label(), self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let class = if e.is_numerical() {
            Class::Numerical
        } else if e.is_io() {
            Class::Io
        } else {
            Class::Validation
        };
        CliError { class, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::io(e.to_string())
    }
}

/// Attaches a path to errors from reading or writing it.
pub trait WithPath<T> {
    fn at(self, path: &Path) -> CliResult<T>;
}

impl<T, E: Into<CliError>> WithPath<T> for Result<T, E> {
    fn at(self, path: &Path) -> CliResult<T> {
        self.map_err(|e| e.into().context(path.display()))
    }
}
