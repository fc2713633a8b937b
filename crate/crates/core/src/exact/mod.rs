//! Exact scalar arithmetic: half-integers, signed square-root rationals and
//! finite sums of radicals, plus sparse matrices over those sums.

mod halfint;
mod matrix;
mod sqrt_rational;
mod sqrt_sum;
mod squarefree;

pub use halfint::HalfInt;
pub use matrix::ExactMatrix;
pub use num::{BigInt, BigRational as Rational, BigUint};
pub use sqrt_rational::SqrtRational;
pub use sqrt_sum::SqrtSum;
pub use squarefree::squarefree_decompose;
