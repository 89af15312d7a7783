//! Units, ambiguous classes and capitulation for the biquadratic fields
//! `k = Q(√(2·p1·p2), i)` with primes `p1 ≡ p2 ≡ 1 (mod 4)`.

pub mod ambiguous;
pub mod capitulation;
pub mod fsu;
pub mod gaussian;
pub mod numtheory;
pub mod pell;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Pair(#[from] numtheory::PairError),
    #[error(transparent)]
    Pell(#[from] pell::PellError),
    #[error(transparent)]
    Gauss(#[from] gaussian::GaussError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("outside the hypotheses of the criterion: {0}")]
    OutsideHypotheses(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("numeric square test undecided at {precision_bits} bits")]
    Undecided { precision_bits: u64 },
}

impl Error {
    /// True for failures that indicate a bug or a violated theorem rather
    /// than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Inconsistent(_) | Error::Undecided { .. } | Error::Gauss(_)
        ) || matches!(self, Error::Pell(pell::PellError::Invariant { .. }))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
