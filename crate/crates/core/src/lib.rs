//! Exact arithmetic engine for SU(2) spin representations.
//!
//! The crate is layered bottom-up:
//!
//! - [`exact`]: half-integers, signed square-root rationals and the ring of
//!   finite radical sums, plus sparse exact matrices over that ring.
//! - [`liealg`]: double-precision complex matrices, the matrix exponential and
//!   membership predicates for `u(n)`, `su(n)`, `U(n)` and `SU(n)`.
//! - [`repn`]: the spin-`s` irreducible representation with exact ladder factors.
//! - [`coupling`]: tensor-product decomposition and Clebsch-Gordan tables built by
//!   highest-weight construction and ladder descent.
//! - [`states`]: exact two-particle states, `S₃` measurement, collapse, sampling and
//!   entanglement detection.
//! - [`verify`]: the aggregated verification suite used by the command-line `verify`.
//!
//! Units have `ħ = 1`, so `S₃` eigenvalues read `m` and the Casimir reads `s(s+1)`.

pub mod coupling;
pub mod error;
pub mod exact;
pub mod liealg;
pub mod repn;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
