use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, BigUint, Integer, One, Zero};

use super::SqrtRational;
use crate::error::{Error, Result};

/// A finite sum `Σ q_d · √d` over distinct square-free radicands `d`.
///
/// Radicals of distinct square-free integers are linearly independent over the
/// rationals, so the canonical term map (no zero coefficients) identifies the
/// value: derived `PartialEq` is value equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SqrtSum {
    terms: BTreeMap<BigUint, BigRational>,
}

impl SqrtSum {
    pub fn zero() -> Self {
        SqrtSum::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut out = SqrtSum::zero();
        out.add_term(BigUint::one(), q);
        out
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// Builds a sum from `(radicand, coefficient)` pairs; radicands must be
    /// square-free.
    pub fn from_terms(terms: impl IntoIterator<Item = (BigUint, BigRational)>) -> Self {
        let mut out = SqrtSum::zero();
        for (d, q) in terms {
            out.add_term(d, q);
        }
        out
    }

    pub fn embed(x: &SqrtRational) -> Self {
        let mut out = SqrtSum::zero();
        if !x.is_zero() {
            out.add_term(x.radicand().clone(), x.signed_coeff());
        }
        out
    }

    fn add_term(&mut self, radicand: BigUint, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(radicand) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(q)` when the only term is rational (or the sum is zero).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    /// Collapses a sum of at most one term back into a [`SqrtRational`].
    pub fn to_sqrt_rational(&self) -> Result<SqrtRational> {
        match self.terms.len() {
            0 => Ok(SqrtRational::zero()),
            1 => {
                let (d, q) = self.terms.iter().next().expect("one term");
                Ok(SqrtRational::new(1, q.numer().clone(), q.denom().clone(), d.clone())?)
            }
            _ => Err(Error::NotSingleRadical),
        }
    }

    pub fn scale(&self, factor: &SqrtRational) -> Self {
        self * &SqrtSum::embed(factor)
    }

    pub fn scale_rational(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return SqrtSum::zero();
        }
        SqrtSum { terms: self.terms.iter().map(|(d, q)| (d.clone(), q * factor)).collect() }
    }

    pub fn to_f64(&self) -> Result<f64> {
        self.terms.iter().try_fold(0.0, |acc, (d, q)| {
            let term = SqrtRational::new(1, q.numer().clone(), q.denom().clone(), d.clone())?;
            Ok(acc + term.to_f64()?)
        })
    }
}

impl Add<&SqrtSum> for &SqrtSum {
    type Output = SqrtSum;
    fn add(self, rhs: &SqrtSum) -> SqrtSum {
        let mut out = self.clone();
        for (d, q) in &rhs.terms {
            out.add_term(d.clone(), q.clone());
        }
        out
    }
}

impl Sub<&SqrtSum> for &SqrtSum {
    type Output = SqrtSum;
    fn sub(self, rhs: &SqrtSum) -> SqrtSum {
        let mut out = self.clone();
        for (d, q) in &rhs.terms {
            out.add_term(d.clone(), -q.clone());
        }
        out
    }
}

impl Neg for &SqrtSum {
    type Output = SqrtSum;
    fn neg(self) -> SqrtSum {
        SqrtSum { terms: self.terms.iter().map(|(d, q)| (d.clone(), -q.clone())).collect() }
    }
}

impl Mul<&SqrtSum> for &SqrtSum {
    type Output = SqrtSum;
    fn mul(self, rhs: &SqrtSum) -> SqrtSum {
        let mut out = SqrtSum::zero();
        for (da, qa) in &self.terms {
            for (db, qb) in &rhs.terms {
                let g = da.gcd(db);
                let radicand = (da / &g) * (db / &g);
                let coeff = qa * qb * BigRational::from_integer(BigInt::from(g));
                out.add_term(radicand, coeff);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for SqrtSum {
            type Output = SqrtSum;
            fn $method(self, rhs: SqrtSum) -> SqrtSum {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for SqrtSum {
    type Output = SqrtSum;
    fn neg(self) -> SqrtSum {
        -&self
    }
}

impl std::iter::Sum for SqrtSum {
    fn sum<I: Iterator<Item = SqrtSum>>(iter: I) -> SqrtSum {
        iter.fold(SqrtSum::zero(), |acc, x| &acc + &x)
    }
}

impl From<&SqrtRational> for SqrtSum {
    fn from(x: &SqrtRational) -> Self {
        SqrtSum::embed(x)
    }
}

impl fmt::Display for SqrtSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (d, q)) in self.terms.iter().enumerate() {
            let term = SqrtRational::new(1, q.numer().clone(), q.denom().clone(), d.clone())
                .map_err(|_| fmt::Error)?;
            let text = term.to_string();
            match (k, text.strip_prefix('-')) {
                (0, _) => f.write_str(&text)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SqrtSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
