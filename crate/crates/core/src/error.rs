use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier mismatch in {op}: {left} vs {right}")]
    CarrierMismatch {
        op: &'static str,
        left: String,
        right: String,
    },

    #[error("{op} needs a square relation, got {src} -> {tgt}")]
    NotSquare { op: &'static str, src: String, tgt: String },

    #[error("unknown element `{label}` in set {set}")]
    UnknownElement { set: String, label: String },

    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("budget exceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded { what: String, needed: u128, cap: u128 },

    #[error("invalid function table: {0}")]
    InvalidFunction(String),

    #[error("{0} has not been validated")]
    NotValidated(&'static str),

    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    #[error("precondition `{name}` failed: {detail}")]
    Precondition { name: &'static str, detail: String },

    /// A checker disagreed with a proven theorem. Always an implementation
    /// bug, never a property of the input.
    #[error("theorem inconsistency: {0}")]
    TheoremInconsistency(String),
}

impl Error {
    pub(crate) fn mismatch(op: &'static str, left: impl ToString, right: impl ToString) -> Self {
        Error::CarrierMismatch {
            op,
            left: left.to_string(),
            right: right.to_string(),
        }
    }

    pub(crate) fn budget(what: impl Into<String>, needed: u128, cap: u128) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed,
            cap,
        }
    }
}
