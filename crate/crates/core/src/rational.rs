//! Reduced fractions with a strictly positive denominator.

use crate::{Error, Result};
use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};
use std::fmt;

/// Arbitrary-precision rational value.
pub type Rational = BigRational;

/// A rational `x = r/p` kept in lowest terms with `p >= 1`.
///
/// Construction from any integer pair moves the sign into the numerator and
/// divides out the gcd, so two fractions compare equal iff they represent the
/// same rational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedFraction {
    value: BigRational,
}

impl ReducedFraction {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Domain("denominator must be nonzero".into()));
        }
        Ok(Self {
            value: BigRational::new(BigInt::from(numer), BigInt::from(denom)),
        })
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Domain("denominator must be nonzero".into()));
        }
        Ok(Self {
            value: BigRational::new(numer, denom),
        })
    }

    pub fn from_rational(value: BigRational) -> Self {
        Self { value }
    }

    pub fn zero() -> Self {
        Self {
            value: BigRational::zero(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer_i64(&self) -> Option<i64> {
        self.value.numer().to_i64()
    }

    pub fn denom_i64(&self) -> Option<i64> {
        self.value.denom().to_i64()
    }

    /// True when both numerator and denominator are odd.
    pub fn is_odd_pair(&self) -> bool {
        self.value.numer().is_odd() && self.value.denom().is_odd()
    }

    pub fn neg(&self) -> Self {
        Self {
            value: -self.value.clone(),
        }
    }

    /// `x + n` for an integer shift.
    pub fn shift(&self, n: i64) -> Self {
        Self {
            value: &self.value + BigRational::from(BigInt::from(n)),
        }
    }
}

impl fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.denom().is_one() {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

/// Canonical rational string, always `num/den` for non-integers.
pub fn rational_string(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
