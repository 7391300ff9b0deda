use thiserror::Error;

/// Errors raised by the library.
///
/// Precondition failures and internal-consistency failures are kept in
/// separate variants: a scan may skip inputs that fail a precondition, but
/// it must never swallow a falsified statement or a broken identity.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is a perfect square")]
    PerfectSquare(String),

    #[error("surd ({p} + sqrt({d}))/{q} is not normalized: q must be nonzero and divide d - p^2")]
    NotNormalized { d: String, p: String, q: String },

    #[error("radicand {0} is too large for the selected integer width")]
    RadicandTooLarge(String),

    #[error("{0} is not squarefree")]
    NotSquarefree(String),

    #[error("word {0:?} is not a palindrome")]
    NotPalindromic(Vec<String>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value {0} is outside the supported range")]
    OutOfScope(String),

    #[error("precision target unreachable: {0}")]
    Precision(String),

    /// A proven statement failed on actual data. Must never fire on a
    /// correct implementation.
    #[error("theorem {theorem} falsified at D = {d}: {detail}")]
    Falsified {
        theorem: &'static str,
        d: String,
        detail: String,
    },

    /// An identity that the engine relies on did not hold.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for the fatal classes (falsification or broken invariant).
    pub fn is_fatal(&self) -> bool {
        matches!(self, Error::Falsified { .. } | Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
