use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigRational;

use super::{SqrtRational, SqrtSum};
use crate::error::{domain, Result};

/// Sparse exact matrix over [`SqrtSum`], stored row by row.
///
/// Zero entries are never stored, so derived equality is exact value equality.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, SqrtSum>>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal((0..n).map(|_| SqrtSum::one()))
    }

    pub fn diagonal(entries: impl IntoIterator<Item = SqrtSum>) -> Self {
        let entries: Vec<SqrtSum> = entries.into_iter().collect();
        let n = entries.len();
        let mut out = Self::zeros(n, n);
        for (k, v) in entries.into_iter().enumerate() {
            out.set(k, k, v);
        }
        out
    }

    pub fn scalar(n: usize, value: &SqrtSum) -> Self {
        Self::diagonal((0..n).map(|_| value.clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> SqrtSum {
        self.data[row].get(&col).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, row: usize, col: usize, value: SqrtSum) {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of bounds");
        if value.is_zero() {
            self.data[row].remove(&col);
        } else {
            self.data[row].insert(col, value);
        }
    }

    /// Adds `value` to the entry at `(row, col)`.
    pub fn accumulate(&mut self, row: usize, col: usize, value: &SqrtSum) {
        let sum = &self.get(row, col) + value;
        self.set(row, col, sum);
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &SqrtSum)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(&c, v)| (r, c, v)))
    }

    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, &SqrtSum)> {
        self.data[row].iter().map(|(&c, v)| (c, v))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            out.set(c, r, v.clone());
        }
        out
    }

    pub fn trace(&self) -> SqrtSum {
        (0..self.rows.min(self.cols)).map(|k| self.get(k, k)).sum()
    }

    pub fn scale(&self, factor: &SqrtSum) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            out.set(r, c, v * factor);
        }
        out
    }

    pub fn scale_rational(&self, factor: &BigRational) -> Self {
        self.scale(&SqrtSum::from_rational(factor.clone()))
    }

    pub fn scale_sr(&self, factor: &SqrtRational) -> Self {
        self.scale(&SqrtSum::embed(factor))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[SqrtSum]) -> Result<Vec<SqrtSum>> {
        if v.len() != self.cols {
            return Err(domain(format!("vector of length {} does not match {} columns", v.len(), self.cols)));
        }
        Ok(self.data.iter().map(|row| row.iter().map(|(&c, a)| a * &v[c]).sum()).collect())
    }

    pub fn checked_mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, SqrtSum> = BTreeMap::new();
            for (&k, a) in row {
                for (&c, b) in &rhs.data[k] {
                    let term = a * b;
                    let slot = acc.entry(c).or_default();
                    *slot = &*slot + &term;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[r] = acc;
        }
        Ok(out)
    }

    fn checked_zip(
        &self,
        rhs: &ExactMatrix,
        op: impl Fn(&SqrtSum, &SqrtSum) -> SqrtSum,
    ) -> Result<ExactMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(domain(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (r, c, v) in rhs.entries() {
            let combined = op(&self.get(r, c), v);
            out.set(r, c, combined);
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        self.checked_zip(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        self.checked_zip(rhs, |a, b| a - b)
    }

    /// `AB − BA`.
    pub fn commutator(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if !self.is_square() || !rhs.is_square() || self.rows != rhs.rows {
            return Err(domain("commutator needs square matrices of equal size"));
        }
        self.checked_mul(rhs)?.checked_sub(&rhs.checked_mul(self)?)
    }

    /// Kronecker product `self ⊗ rhs`; index `(i·rhs.rows + k, j·rhs.cols + l)`.
    pub fn kron(&self, rhs: &ExactMatrix) -> ExactMatrix {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for (i, j, a) in self.entries() {
            for (k, l, b) in rhs.entries() {
                out.set(i * rhs.rows + k, j * rhs.cols + l, a * b);
            }
        }
        out
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for (r, c, v) in self.entries() {
            writeln!(f, "  ({r}, {c}) = {v}")?;
        }
        write!(f, "]")
    }
}

// Operator sugar for same-shape matrices; panics on shape mismatch.
impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_add(rhs).expect("shape mismatch in matrix addition")
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_sub(rhs).expect("shape mismatch in matrix subtraction")
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("shape mismatch in matrix product")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.scale(&SqrtSum::from_integer(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> SqrtSum {
        SqrtSum::from_integer(n)
    }

    fn dense(rows: &[&[i64]]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, int(v));
            }
        }
        m
    }

    #[test]
    fn product_and_commutator() {
        let a = dense(&[&[0, 1], &[0, 0]]);
        let b = dense(&[&[0, 0], &[1, 0]]);
        assert_eq!(&a * &b, dense(&[&[1, 0], &[0, 0]]));
        assert_eq!(a.commutator(&b).unwrap(), dense(&[&[1, 0], &[0, -1]]));
        assert!(a.commutator(&a).unwrap().is_zero());
        assert_eq!(a.transpose(), b);
    }

    #[test]
    fn zeros_are_not_stored() {
        let mut m = ExactMatrix::identity(3);
        m.accumulate(1, 1, &int(-1));
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.trace(), int(2));
    }

    #[test]
    fn kron_layout() {
        let a = dense(&[&[1, 2], &[3, 4]]);
        let i = ExactMatrix::identity(2);
        let k = a.kron(&i);
        assert_eq!(k.get(0, 2), int(2));
        assert_eq!(k.get(3, 1), int(3));
        assert_eq!(k.get(1, 0), int(0));
        assert_eq!(k.nnz(), 8);
    }

    #[test]
    fn shape_errors() {
        let a = ExactMatrix::zeros(2, 3);
        assert!(a.checked_mul(&a).is_err());
        assert!(a.apply(&[int(1)]).is_err());
        assert!(a.commutator(&a).is_err());
    }
}
