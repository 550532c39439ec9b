use thiserror::Error;

use crate::syntax::Pos;

/// Everything that is not a verdict. Theorem inconsistencies exit 1; all
/// other variants are input errors and exit 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },

    #[error("{pos}: undeclared name `{name}`")]
    Dangling { pos: Pos, name: String },

    #[error("{pos}: {msg}")]
    Invalid { pos: Pos, msg: String },

    #[error("unknown command `{0}`")]
    UnknownCommand(String),

    #[error("{0}")]
    Usage(String),

    #[error("empty document")]
    EmptyDocument,

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Core(#[from] reprkit::Error),
}

impl CliError {
    pub fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        CliError::Syntax { pos, msg: msg.into() }
    }

    pub fn invalid(pos: Pos, msg: impl Into<String>) -> Self {
        CliError::Invalid { pos, msg: msg.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(reprkit::Error::TheoremInconsistency(_)) => 1,
            _ => 2,
        }
    }
}
