use thiserror::Error;

use crate::ratpoly::LaurentPolynomial;

#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("not divisible (remainder {remainder})")]
    NonDivisible { remainder: LaurentPolynomial },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("no generic form found after {attempts} attempts")]
    GenericityNotFound { attempts: u32 },

    #[error("check failed: {0}")]
    Check(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Broad classes used for reporting and process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Input,
    Resource,
    Check,
    Internal,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Parse { .. } | Error::Input(_) | Error::Precondition(_) | Error::Io(_) => {
                ErrorCategory::Input
            }
            Error::Resource(_) => ErrorCategory::Resource,
            Error::GenericityNotFound { .. } | Error::Check(_) => ErrorCategory::Check,
            Error::Structural(_) | Error::NonDivisible { .. } | Error::Internal(_) => {
                ErrorCategory::Internal
            }
        }
    }

    pub fn category_name(&self) -> &'static str {
        match self.category() {
            ErrorCategory::Input => "input",
            ErrorCategory::Resource => "resource",
            ErrorCategory::Check => "check",
            ErrorCategory::Internal => "internal",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
