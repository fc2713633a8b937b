use crate::error::Result;
use crate::exact::{ExactMatrix, HalfInt, SqrtSum};
use crate::repn::build_rep;

use super::UncoupledBasis;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotalKind {
    S3,
    SPlus,
    SMinus,
    SSquared,
}

/// A total spin operator `S⁽¹⁾⊗1 + 1⊗S⁽²⁾` (or the total `S²`) acting on the
/// product basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalOperator {
    kind: TotalKind,
    basis: UncoupledBasis,
    matrix: ExactMatrix,
}

impl TotalOperator {
    pub fn kind(&self) -> TotalKind {
        self.kind
    }

    pub fn basis(&self) -> UncoupledBasis {
        self.basis
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ExactMatrix {
        self.matrix
    }

    pub fn apply(&self, v: &[SqrtSum]) -> Result<Vec<SqrtSum>> {
        self.matrix.apply(v)
    }
}

fn kron_sum(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    &a.kron(&ExactMatrix::identity(b.rows())) + &ExactMatrix::identity(a.rows()).kron(b)
}

/// Builds a total operator on `s₁ ⊗ s₂`.
///
/// `S²` is assembled as `S₊S₋ − S₃ + S₃²` from the total ladder operators.
pub fn total_operator(s1: HalfInt, s2: HalfInt, kind: TotalKind) -> Result<TotalOperator> {
    let basis = UncoupledBasis::new(s1, s2)?;
    let (r1, r2) = (build_rep(s1)?, build_rep(s2)?);
    let matrix = match kind {
        TotalKind::S3 => kron_sum(&r1.s3(), &r2.s3()),
        TotalKind::SPlus => kron_sum(&r1.s_plus(), &r2.s_plus()),
        TotalKind::SMinus => kron_sum(&r1.s_minus(), &r2.s_minus()),
        TotalKind::SSquared => {
            let s3 = kron_sum(&r1.s3(), &r2.s3());
            let sp = kron_sum(&r1.s_plus(), &r2.s_plus());
            let sm = kron_sum(&r1.s_minus(), &r2.s_minus());
            &(&(&sp * &sm) - &s3) + &(&s3 * &s3)
        }
    };
    Ok(TotalOperator { kind, basis, matrix })
}

/// Total `S²` expanded per particle:
/// `S²⁽¹⁾⊗1 + 1⊗S²⁽²⁾ + 2(S₁⊗S₁ + S₂⊗S₂ + S₃⊗S₃)`, using
/// `S₁⊗S₁ + S₂⊗S₂ = ½(S₊⊗S₋ + S₋⊗S₊)` to stay real.
pub fn casimir_expanded(s1: HalfInt, s2: HalfInt) -> Result<ExactMatrix> {
    let (r1, r2) = (build_rep(s1)?, build_rep(s2)?);
    let single = kron_sum(&r1.casimir(), &r2.casimir());
    let cross = &(&r1.s_plus().kron(&r2.s_minus()) + &r1.s_minus().kron(&r2.s_plus()))
        + &r1.s3().kron(&r2.s3()).scale(&SqrtSum::from_integer(2));
    Ok(&single + &cross)
}
