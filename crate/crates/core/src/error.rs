use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("malformed cycle notation {text:?}: {reason}")]
    CycleSyntax { text: String, reason: String },

    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("point {point} repeated in cycle notation")]
    RepeatedPoint { point: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("group order cap exceeded: order would exceed {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("work budget exceeded: {used} units used, budget {budget}")]
    BudgetExceeded { used: u64, budget: u64 },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("not an exact factorization: {0}")]
    NotAFactorization(String),

    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("invalid matched pair: {0}")]
    InvalidMatchedPair(String),

    #[error("action extension conflict: {0}")]
    ActionConflict(String),

    #[error("invalid deformation map: {0}")]
    InvalidDeformationMap(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Cap and budget failures, as opposed to bad input or failed checks.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::OrderCapExceeded { .. } | Error::BudgetExceeded { .. })
    }

    /// Failures caused by unreadable or ill-formed input.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::CycleSyntax { .. }
                | Error::PointOutOfRange { .. }
                | Error::RepeatedPoint { .. }
                | Error::NotAPermutation(_)
                | Error::DegreeMismatch { .. }
                | Error::IndexOutOfRange { .. }
                | Error::Dimension(_)
                | Error::Input(_)
                | Error::Json(_)
                | Error::Io(_)
        )
    }
}
