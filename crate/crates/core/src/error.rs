use thiserror::Error;

use crate::model::ValidationReport;

/// Errors raised anywhere in the toolkit.
///
/// Variants fall into three families that callers (notably the CLI) map to
/// distinct exit codes: usage/format problems, semantic or validation
/// failures, and resource limits.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed tree: {0}")]
    Structure(String),

    #[error("invalid tree model: {0}")]
    InvalidModel(ValidationReport),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("symbol `{0}` is not part of the vocabulary")]
    Vocabulary(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("{0}")]
    Semantic(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("no cap up to {largest_failing} yields an equivalent kernel")]
    CapExhausted { largest_failing: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }

    /// Input that does not parse or is malformed, as opposed to
    /// well-formed input that fails a semantic check.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::Structure(_) | Error::Syntax { .. } | Error::Input(_) | Error::Json(_)
        )
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Structure(_) => "structure",
            Error::InvalidModel(_) => "invalid-model",
            Error::Syntax { .. } => "syntax",
            Error::UnboundVariable(_) => "unbound-variable",
            Error::Vocabulary(_) => "vocabulary",
            Error::Input(_) => "input",
            Error::Semantic(_) => "semantic",
            Error::Resource(_) => "resource",
            Error::CapExhausted { .. } => "cap-exhausted",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
