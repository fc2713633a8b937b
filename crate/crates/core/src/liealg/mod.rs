//! Double-precision complex matrices for the group-level checks: generators of
//! `su(2)`, commutators, the matrix exponential, membership in `u(n)`, `su(n)`,
//! `U(n)`, `SU(n)`, and the irreducible representations of `U(1)`.

mod algebra;
mod expm;
mod matrix;

pub use algebra::{
    commutator, generator_x, gram_rank, in_su_algebra, in_su_group, in_u_algebra, in_u_group,
    linearly_independent, pauli, spin_float, su_basis, u1_irrep, u_basis, U1Irrep, DEFAULT_TOL,
};
pub use expm::matexp;
pub use matrix::ComplexMatrix;
pub use num::complex::Complex64;
