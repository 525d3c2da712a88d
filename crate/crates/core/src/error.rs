use thiserror::Error;

use crate::series::EvalReport;

/// Errors raised by the distribution functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The series hit its iteration cap before the truncation bound met the
    /// tolerance. The partial report is kept for diagnostics.
    #[error(
        "series did not converge after {} iterations (truncation bound {:e})",
        .0.iterations,
        .0.achieved_bound
    )]
    NotConverged(Box<EvalReport>),

    /// A bracketing or root-refinement search ran out of budget.
    #[error("root search did not converge: {0}")]
    SearchFailed(String),

    /// A recurrence seed is too small to be represented, so the recurrence
    /// cannot start from this index.
    #[error("underflow at index {index}: {quantity} is below the representable range")]
    Underflow { index: u64, quantity: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

impl Error {
    /// True for the two flavours of "ran out of budget".
    pub fn is_not_converged(&self) -> bool {
        matches!(self, Error::NotConverged(_) | Error::SearchFailed(_))
    }
}
