use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Error,
    Warning,
}

/// One finding about a config, tied to the field it concerns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub level: Level,
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    pub fn error(field: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { level: Level::Error, field: field.into(), message: message.into() }
    }

    pub fn warning(field: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { level: Level::Warning, field: field.into(), message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.level == Level::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.level {
            Level::Error => "error",
            Level::Warning => "warning",
        };
        if self.field.is_empty() {
            write!(f, "{level}: {}", self.message)
        } else {
            write!(f, "{level}: {}: {}", self.field, self.message)
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration ({} problem(s))", .0.iter().filter(|d| d.is_error()).count())]
    Validation(Vec<Diagnostic>),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn runtime(e: impl fmt::Display) -> Self {
        HarnessError::Runtime(e.to_string())
    }

    /// 2 for configs that do not validate, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Validation(_) => 2,
            HarnessError::Runtime(_) | HarnessError::Io(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
