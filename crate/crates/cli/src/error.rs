use std::fmt;

use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or parameters out of range; exit code 2.
    Validation(String),
    /// Anything else that stops the run; exit code 1.
    Internal(String),
}

impl CliError {
    pub fn validation(e: impl fmt::Display) -> Self {
        CliError::Validation(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (kind, message) = match self {
            CliError::Validation(m) => ("validation", m),
            CliError::Internal(m) => ("internal", m),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

impl From<poncelet_core::Error> for CliError {
    fn from(e: poncelet_core::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
