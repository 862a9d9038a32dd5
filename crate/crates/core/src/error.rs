use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The multiset does not distinguish candidates `i` and `j`.
    #[error("candidates {i} and {j} have equal distance sums")]
    Tie { i: usize, j: usize },

    #[error("comparison undecided at the precision cap: {0}")]
    Indeterminate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("ordering is not protrusive")]
    NotProtrusive,

    #[error("construction not applicable: {0}")]
    NotApplicable(String),

    #[error("failed to stabilize: {0}")]
    Stabilization(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Error::Indeterminate(_))
    }
}
