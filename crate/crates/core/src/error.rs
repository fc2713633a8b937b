use num::BigUint;
use thiserror::Error;

use crate::exact::HalfInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two square-root rationals with different square-free radicands were added.
    #[error("incommensurate addition: radicands {left} and {right} differ")]
    IncommensurateAdd { left: BigUint, right: BigUint },

    /// An exact value does not fit into a double.
    #[error("value out of floating-point range")]
    Range,

    /// A measurement outcome with probability zero was requested.
    #[error("outcome m = {m} has probability zero")]
    ImpossibleOutcome { m: HalfInt },

    /// A sum of radicals did not collapse to a single signed square-root rational.
    #[error("value is not a single signed square-root rational")]
    NotSingleRadical,

    /// A state vector whose squared amplitudes do not sum to one.
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(String),

    /// An invariant that the algorithms guarantee was violated.
    #[error("internal fault: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
