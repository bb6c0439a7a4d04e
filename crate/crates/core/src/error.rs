use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} out of range (allowed {min}..={max})")]
    Range { value: i64, min: i64, max: i64 },

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("malformed code {code}: {reason}")]
    MalformedCode { code: String, reason: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Self {
        Error::Shape {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn malformed(code: impl ToString, reason: impl Into<String>) -> Self {
        Error::MalformedCode {
            code: code.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
