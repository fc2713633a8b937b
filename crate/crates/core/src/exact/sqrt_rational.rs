use std::fmt;
use std::ops::{Mul, Neg};

use num::bigint::Sign;
use num::{BigInt, BigRational, BigUint, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::squarefree::squarefree_decompose;
use crate::error::{domain, Error, Result};

/// An exact real of the form `sign · coeff · √radicand`.
///
/// Canonical form: `coeff` is a positive reduced rational, `radicand` is
/// square-free, and zero is `sign = 0, coeff = 1, radicand = 1`. Two values are
/// equal exactly when their canonical fields are equal, and two values can be
/// added as a single term exactly when their radicands agree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    sign: i8,
    coeff: BigRational,
    radicand: BigUint,
}

impl SqrtRational {
    pub fn zero() -> Self {
        SqrtRational { sign: 0, coeff: BigRational::one(), radicand: BigUint::one() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(value: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(value.into()))
    }

    pub fn from_rational(value: &BigRational) -> Self {
        if value.is_zero() {
            return Self::zero();
        }
        SqrtRational {
            sign: if value.is_negative() { -1 } else { 1 },
            coeff: value.abs(),
            radicand: BigUint::one(),
        }
    }

    /// Canonicalizing constructor for `sign · (num/den) · √radicand`.
    ///
    /// A negative `num` flips the sign. `den` must be positive and `radicand`
    /// at least one.
    pub fn new(sign: i8, num: BigInt, den: BigInt, radicand: BigUint) -> Result<Self> {
        if !(-1..=1).contains(&sign) {
            return Err(domain(format!("sign must be -1, 0 or 1, got {sign}")));
        }
        if den.is_zero() {
            return Err(domain("zero denominator"));
        }
        if den.is_negative() {
            return Err(domain("denominator must be positive"));
        }
        if radicand.is_zero() {
            return Err(domain("zero radicand"));
        }
        if sign == 0 || num.is_zero() {
            return Ok(Self::zero());
        }
        let sign = if num.is_negative() { -sign } else { sign };
        let (root, core) = squarefree_decompose(&radicand);
        let coeff = BigRational::new(num.abs() * BigInt::from(root), den);
        Ok(SqrtRational { sign, coeff, radicand: core })
    }

    /// `√q` for a nonnegative rational `q`.
    pub fn sqrt(q: &BigRational) -> Result<Self> {
        Self::signed_sqrt(1, q)
    }

    /// `sign · √q` for a nonnegative rational `q`.
    pub fn signed_sqrt(sign: i8, q: &BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(domain(format!("square root of negative rational {q}")));
        }
        // √(p/d) = (1/d)·√(p·d)
        let radicand = (q.numer() * q.denom()).to_biguint().expect("nonnegative");
        if radicand.is_zero() {
            return Ok(Self::zero());
        }
        Self::new(sign, BigInt::one(), q.denom().clone(), radicand)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign < 0
    }

    /// `coeff² · radicand`, the exact square.
    pub fn square(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        &self.coeff * &self.coeff * BigRational::from_integer(BigInt::from(self.radicand.clone()))
    }

    /// The square carrying the sign of `self`; determines the value uniquely.
    pub fn signed_square(&self) -> BigRational {
        let sq = self.square();
        if self.is_negative() {
            -sq
        } else {
            sq
        }
    }

    /// `Some(q)` when the value is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.radicand.is_one() {
            Some(self.signed_coeff())
        } else {
            None
        }
    }

    pub(crate) fn signed_coeff(&self) -> BigRational {
        match self.sign {
            -1 => -self.coeff.clone(),
            0 => BigRational::zero(),
            _ => self.coeff.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        let mut out = self.clone();
        if out.sign < 0 {
            out.sign = 1;
        }
        out
    }

    /// Exact sum of two commensurate values.
    ///
    /// Fails with [`Error::IncommensurateAdd`] when both are nonzero and their
    /// radicands differ, since the sum is then not a single term.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.radicand != other.radicand {
            return Err(Error::IncommensurateAdd {
                left: self.radicand.clone(),
                right: other.radicand.clone(),
            });
        }
        let sum = self.signed_coeff() + other.signed_coeff();
        if sum.is_zero() {
            return Ok(Self::zero());
        }
        Ok(SqrtRational {
            sign: if sum.is_negative() { -1 } else { 1 },
            coeff: sum.abs(),
            radicand: self.radicand.clone(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Exact quotient; fails when `other` is zero.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// `1 / (c√d) = (1/(c·d))·√d`.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(domain("division by zero"));
        }
        let d = BigRational::from_integer(BigInt::from(self.radicand.clone()));
        Ok(SqrtRational {
            sign: self.sign,
            coeff: (&self.coeff * d).recip(),
            radicand: self.radicand.clone(),
        })
    }

    /// Scales by an exact rational.
    pub fn scale(&self, factor: &BigRational) -> Self {
        self * &SqrtRational::from_rational(factor)
    }

    /// Nearest-double approximation.
    ///
    /// Fails with [`Error::Range`] when the value overflows `f64`.
    pub fn to_f64(&self) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        // One rounding of the exact square then a correctly rounded sqrt,
        // falling back to coeff·√d when the square itself overflows.
        let magnitude = match self.square().to_f64() {
            Some(sq) if sq.is_finite() && sq > 0.0 => sq.sqrt(),
            _ => {
                let c = self.coeff.to_f64().ok_or(Error::Range)?;
                let d = self.radicand.to_f64().ok_or(Error::Range)?;
                c * d.sqrt()
            }
        };
        if !magnitude.is_finite() {
            return Err(Error::Range);
        }
        Ok(f64::from(self.sign) * magnitude)
    }
}

impl Default for SqrtRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Mul<&SqrtRational> for &SqrtRational {
    type Output = SqrtRational;

    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        if self.is_zero() || rhs.is_zero() {
            return SqrtRational::zero();
        }
        // √a·√b = g·√((a/g)(b/g)) with g = gcd(a, b); the cofactors are coprime
        // and square-free, so their product is square-free.
        let g = self.radicand.gcd(&rhs.radicand);
        let radicand = (&self.radicand / &g) * (&rhs.radicand / &g);
        let coeff = &self.coeff * &rhs.coeff * BigRational::from_integer(BigInt::from(g));
        SqrtRational { sign: self.sign * rhs.sign, coeff, radicand }
    }
}

impl Mul for SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: SqrtRational) -> SqrtRational {
        &self * &rhs
    }
}

impl Neg for &SqrtRational {
    type Output = SqrtRational;
    fn neg(self) -> SqrtRational {
        let mut out = self.clone();
        out.sign = -out.sign;
        out
    }
}

impl Neg for SqrtRational {
    type Output = SqrtRational;
    fn neg(mut self) -> SqrtRational {
        self.sign = -self.sign;
        self
    }
}

/// Renders `[-]{a}/{b}√{d}`, omitting the rational part when it is one and
/// the radical when `d = 1`.
impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.is_negative() {
            f.write_str("-")?;
        }
        let unit_coeff = self.coeff.is_one();
        let unit_radicand = self.radicand.is_one();
        if !unit_coeff || unit_radicand {
            if self.coeff.is_integer() {
                write!(f, "{}", self.coeff.numer())?;
            } else {
                write!(f, "{}/{}", self.coeff.numer(), self.coeff.denom())?;
            }
        }
        if !unit_radicand {
            write!(f, "√{}", self.radicand)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct SqrtRationalJson {
    sign: i8,
    num: String,
    den: String,
    radicand: String,
}

impl Serialize for SqrtRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SqrtRationalJson {
            sign: self.sign,
            num: self.coeff.numer().to_string(),
            den: self.coeff.denom().to_string(),
            radicand: self.radicand.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SqrtRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SqrtRationalJson::deserialize(deserializer)?;
        let num: BigInt = raw.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = raw.den.parse().map_err(D::Error::custom)?;
        let radicand: BigUint = raw.radicand.parse().map_err(D::Error::custom)?;
        if num.sign() == Sign::Minus {
            return Err(D::Error::custom("num must be nonnegative; the sign field carries the sign"));
        }
        SqrtRational::new(raw.sign, num, den, radicand).map_err(D::Error::custom)
    }
}
