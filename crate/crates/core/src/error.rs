use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A hypothesis of the worst-case construction does not hold.
    #[error("infeasible scenario: {0}")]
    Infeasible(String),

    /// The worst-case construction broke one of its own invariants.
    #[error("worst-case construction failed: {0}")]
    Construction(String),
}
