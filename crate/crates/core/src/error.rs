use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: u64 },

    #[error("not a von Neumann ordinal: {0}")]
    NotAnOrdinal(String),

    #[error("set is not a subset of the ordering's field")]
    NotASubset,

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("language mismatch: {0}")]
    LanguageMismatch(String),

    #[error("unbound variable `{0}`")]
    Unbound(String),

    #[error("{op} is outside the literal domain ({detail})")]
    OutsideLiteralDomain { op: &'static str, detail: String },

    #[error("{0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, limit: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            limit,
        }
    }

    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
