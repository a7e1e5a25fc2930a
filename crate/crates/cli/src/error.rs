use std::fmt;

use omnisurf::ErrorClass;

/// Failure carrying the class that selects the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub class: ErrorClass,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { class: ErrorClass::Config, message: message.into() }
    }

    pub fn physics(message: impl Into<String>) -> Self {
        CliError { class: ErrorClass::Physics, message: message.into() }
    }

    /// Prefixes the message with where the failure happened.
    pub fn context(mut self, what: impl fmt::Display) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.class)
    }
}

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Config => 1,
        ErrorClass::Physics => 2,
        ErrorClass::Numerical => 3,
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = match self.class {
            ErrorClass::Config => "configuration error",
            ErrorClass::Physics => "physics violation",
            ErrorClass::Numerical => "numerical failure",
        };
        write!(f, "{class}: {}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<omnisurf::Error> for CliError {
    fn from(e: omnisurf::Error) -> Self {
        CliError { class: e.class(), message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::config(e.to_string())
    }
}
