//! The spin-`s` irreducible representation with exact entries.
//!
//! Basis index `k ∈ 0..=2s` carries `m = s − k`, so `S₃` is
//! `diag(s, s−1, …, −s)`, `S₊` is strictly upper bidiagonal and `S₋ = S₊ᵀ`.
//! Only `S₃`, `S±` and `S²` are exact; operators needing the imaginary unit
//! (`S₁`, `S₂`, `X_j`) exist in the float layer through [`rep_to_float`].

use num::complex::Complex64;
use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact::{ExactMatrix, HalfInt, SqrtRational, SqrtSum};
use crate::liealg::ComplexMatrix;
use crate::verify::Check;

/// Direction of a ladder operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Plus,
    Minus,
}

pub(crate) fn check_spin(s: HalfInt) -> Result<()> {
    if s.is_negative() {
        return Err(domain(format!("spin must be nonnegative, got {s}")));
    }
    Ok(())
}

pub(crate) fn check_projection(s: HalfInt, m: HalfInt) -> Result<()> {
    check_spin(s)?;
    if !s.same_parity(m) {
        return Err(domain(format!("m = {m} differs from s = {s} by a non-integer")));
    }
    if m.abs() > s {
        return Err(domain(format!("|m| = {} exceeds s = {s}", m.abs())));
    }
    Ok(())
}

/// `√(s(s+1) − m(m±1))`, the factor in `S±|s m⟩ = b|s m±1⟩`.
///
/// Exactly zero at the top (`Plus`, `m = s`) and bottom (`Minus`, `m = −s`).
pub fn ladder_factor(s: HalfInt, m: HalfInt, dir: Ladder) -> Result<SqrtRational> {
    check_projection(s, m)?;
    let (s2, m2) = (BigInt::from(s.twice()), BigInt::from(m.twice()));
    let shift = match dir {
        Ladder::Plus => 2,
        Ladder::Minus => -2,
    };
    // With S = 2s and M = 2m the radicand is (S(S+2) − M(M±2)) / 4.
    let num = &s2 * (&s2 + 2) - &m2 * (&m2 + shift);
    SqrtRational::sqrt(&BigRational::new(num, BigInt::from(4)))
}

/// The spin-`s` representation, stored as its `S₃` diagonal and the
/// superdiagonal of `S₊`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpinRepJson")]
pub struct SpinRep {
    s: HalfInt,
    dim: usize,
    #[serde(rename = "s3")]
    s3_diag: Vec<HalfInt>,
    #[serde(rename = "b")]
    plus_factors: Vec<SqrtRational>,
}

#[derive(Deserialize)]
struct SpinRepJson {
    s: HalfInt,
    dim: usize,
    s3: Vec<HalfInt>,
    b: Vec<SqrtRational>,
}

impl TryFrom<SpinRepJson> for SpinRep {
    type Error = Error;

    fn try_from(raw: SpinRepJson) -> Result<Self> {
        let rep = build_rep(raw.s)?;
        if raw.dim != rep.dim || raw.s3 != rep.s3_diag || raw.b != rep.plus_factors {
            return Err(domain(format!("fields do not describe the spin {} representation", raw.s)));
        }
        Ok(rep)
    }
}

/// Builds the spin-`s` representation.
pub fn build_rep(s: HalfInt) -> Result<SpinRep> {
    check_spin(s)?;
    let s3_diag: Vec<HalfInt> = s.descending().collect();
    let plus_factors =
        s3_diag[1..].iter().map(|&m| ladder_factor(s, m, Ladder::Plus)).collect::<Result<Vec<_>>>()?;
    Ok(SpinRep { s, dim: s.multiplicity(), s3_diag, plus_factors })
}

impl SpinRep {
    pub fn s(&self) -> HalfInt {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s3_diag(&self) -> &[HalfInt] {
        &self.s3_diag
    }

    /// `plus_factors[k] = b_{s−1−k}`, the `(k, k+1)` entry of `S₊`.
    pub fn plus_factors(&self) -> &[SqrtRational] {
        &self.plus_factors
    }

    /// `m` carried by basis index `k`.
    pub fn m_at(&self, k: usize) -> HalfInt {
        self.s3_diag[k]
    }

    /// Basis index of `|s m⟩`.
    pub fn index_of(&self, m: HalfInt) -> Result<usize> {
        check_projection(self.s, m)?;
        Ok(((self.s - m).twice() / 2) as usize)
    }

    pub fn s3(&self) -> ExactMatrix {
        ExactMatrix::diagonal(self.s3_diag.iter().map(|m| SqrtSum::from_rational(m.to_rational())))
    }

    pub fn s_plus(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.dim, self.dim);
        for (k, b) in self.plus_factors.iter().enumerate() {
            out.set(k, k + 1, SqrtSum::embed(b));
        }
        out
    }

    pub fn s_minus(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.dim, self.dim);
        for (k, b) in self.plus_factors.iter().enumerate() {
            out.set(k + 1, k, SqrtSum::embed(b));
        }
        out
    }

    /// `S² = S₊S₋ − S₃ + S₃²`.
    pub fn casimir(&self) -> ExactMatrix {
        let s3 = self.s3();
        &(&(&self.s_plus() * &self.s_minus()) - &s3) + &(&s3 * &s3)
    }
}

pub fn casimir(rep: &SpinRep) -> ExactMatrix {
    rep.casimir()
}

/// Exact structural checks of a representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepReport {
    pub s: HalfInt,
    pub checks: Vec<Check>,
}

impl RepReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs every exact identity the representation must satisfy.
pub fn verify_rep(rep: &SpinRep) -> RepReport {
    let s3 = rep.s3();
    let sp = rep.s_plus();
    let sm = rep.s_minus();
    let n = rep.dim();
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool| checks.push(Check::new(name, passed));

    push("dim = 2s+1", n == rep.s.multiplicity() && rep.s3_diag.len() == n);
    push(
        "S3 diagonal descends from s to -s",
        rep.s3_diag.first() == Some(&rep.s)
            && rep.s3_diag.last() == Some(&-rep.s)
            && rep.s3_diag.windows(2).all(|w| w[0] - w[1] == HalfInt::ONE),
    );
    push("[S3,S+] = S+", s3.commutator(&sp).is_ok_and(|c| c == sp));
    push("[S3,S-] = -S-", s3.commutator(&sm).is_ok_and(|c| c == -&sm));
    push("[S+,S-] = 2 S3", sp.commutator(&sm).is_ok_and(|c| c == s3.scale(&SqrtSum::from_integer(2))));
    let ss1 = SqrtSum::from_rational(
        rep.s.to_rational() * (rep.s.to_rational() + BigRational::from_integer(1.into())),
    );
    push("S^2 = s(s+1) I", rep.casimir() == ExactMatrix::scalar(n, &ss1));
    push("tr S3 = 0", s3.trace().is_zero());
    push("S- = S+^T", sm == sp.transpose());
    push("ladder factors positive", rep.plus_factors.iter().all(SqrtRational::is_positive));

    // S₊ e_k = b₊(m_k) e_{k−1}, column by column.
    let action = (0..n).all(|k| {
        let expected = ladder_factor(rep.s, rep.m_at(k), Ladder::Plus).expect("valid m");
        let column: Vec<(usize, SqrtSum)> =
            (0..n).map(|r| (r, sp.get(r, k))).filter(|(_, v)| !v.is_zero()).collect();
        if expected.is_zero() {
            column.is_empty()
        } else {
            column == vec![(k - 1, SqrtSum::embed(&expected))]
        }
    });
    push("S+ action matches ladder factors", action);

    RepReport { s: rep.s, checks }
}

/// Operators that can be rendered in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinOperator {
    S1,
    S2,
    S3,
    SPlus,
    SMinus,
    X1,
    X2,
    X3,
}

/// Converts an exact real matrix to a complex double matrix.
pub fn exact_to_complex(m: &ExactMatrix) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for (r, c, v) in m.entries() {
        out[(r, c)] = Complex64::new(v.to_f64()?, 0.0);
    }
    Ok(out)
}

/// Double-precision matrix of the requested operator in this representation.
///
/// `S₁ = (S₊ + S₋)/2`, `S₂ = (S₊ − S₋)/2i`, `X_j = −i·S_j`.
pub fn rep_to_float(rep: &SpinRep, which: SpinOperator) -> Result<ComplexMatrix> {
    let plus = exact_to_complex(&rep.s_plus())?;
    let minus = exact_to_complex(&rep.s_minus())?;
    let s_j = |j: u8| -> Result<ComplexMatrix> {
        Ok(match j {
            1 => (&plus + &minus).scale_real(0.5),
            2 => (&plus - &minus).scale(Complex64::new(0.0, -0.5)),
            _ => exact_to_complex(&rep.s3())?,
        })
    };
    let minus_i = Complex64::new(0.0, -1.0);
    Ok(match which {
        SpinOperator::S1 => s_j(1)?,
        SpinOperator::S2 => s_j(2)?,
        SpinOperator::S3 => s_j(3)?,
        SpinOperator::SPlus => plus,
        SpinOperator::SMinus => minus,
        SpinOperator::X1 => s_j(1)?.scale(minus_i),
        SpinOperator::X2 => s_j(2)?.scale(minus_i),
        SpinOperator::X3 => s_j(3)?.scale(minus_i),
    })
}
