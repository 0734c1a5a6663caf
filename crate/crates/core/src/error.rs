use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("selected columns do not reduce to an identity block")]
    SingularSelection,
    #[error("matrix is rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("no solution found after {iterations} iterations")]
    NotFound { iterations: u64 },
    #[error("signing failed: {0}")]
    SigningFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("adversary exceeded its {oracle} budget of {limit} queries")]
    AdversaryBudget { oracle: &'static str, limit: u64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn dim(context: &'static str, expected: usize, found: usize) -> Self {
        Error::Dimension {
            context,
            expected,
            found,
        }
    }
}
