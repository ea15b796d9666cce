//! Exact nonnegative fractions, weighted mediants and cross-differences.
//!
//! A [`Fraction`] is a raw numerator/denominator pair. It is never reduced
//! behind the caller's back: cross-differences depend on the representation,
//! so reduction is an explicit step that reports the factor it divided out.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractionError {
    #[error("denominator is zero in {0}/0 (only 1/0 is accepted)")]
    ZeroDenominator(BigUint),
    #[error("malformed fraction {0:?}: expected num/den with decimal digits only")]
    Malformed(String),
}

/// A nonnegative fraction `num/den`, not necessarily in lowest terms.
///
/// The denominator is positive, with one exception: `1/0` is accepted as the
/// right endpoint of the classical (k = 2) tree. It orders above every other
/// fraction under cross-multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: BigUint,
    den: BigUint,
}

/// A fraction brought to lowest terms together with the factor removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub reduced: Fraction,
    pub factor: BigUint,
}

/// One weighted mediant: the (possibly reduced) fraction and the factor
/// that was divided out of the raw combination. `factor` is 1 when the
/// mediant was requested unreduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mediant {
    pub fraction: Fraction,
    pub factor: BigUint,
}

impl Fraction {
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Result<Self, FractionError> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() && !num.is_one() {
            return Err(FractionError::ZeroDenominator(num));
        }
        Ok(Fraction { num, den })
    }

    /// Shorthand for small literals. Panics on a zero denominator other than `1/0`.
    pub fn from_u64(num: u64, den: u64) -> Self {
        Fraction::new(num, den).expect("invalid fraction literal")
    }

    pub fn zero() -> Self {
        Fraction::from_u64(0, 1)
    }

    pub fn one() -> Self {
        Fraction::from_u64(1, 1)
    }

    pub fn infinity() -> Self {
        Fraction::from_u64(1, 0)
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn is_reduced(&self) -> bool {
        self.num.gcd(&self.den).is_one()
    }

    /// Divides out `gcd(num, den)`, with `gcd(0, d) = d` so zero becomes `0/1`.
    pub fn reduce(&self) -> ReductionResult {
        let factor = self.num.gcd(&self.den);
        if factor.is_one() {
            return ReductionResult { reduced: self.clone(), factor };
        }
        ReductionResult { reduced: Fraction { num: &self.num / &factor, den: &self.den / &factor }, factor }
    }

    /// Rational equality, ignoring representation.
    pub fn value_eq(&self, other: &Fraction) -> bool {
        self.value_cmp(other) == Ordering::Equal
    }

    /// Compares the represented rationals by cross-multiplication.
    pub fn value_cmp(&self, other: &Fraction) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = FractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || FractionError::Malformed(s.to_string());
        let (num, den) = s.split_once('/').ok_or_else(malformed)?;
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(num) || !digits(den) {
            return Err(malformed());
        }
        let num: BigUint = num.parse().map_err(|_| malformed())?;
        let den: BigUint = den.parse().map_err(|_| malformed())?;
        Fraction::new(num, den)
    }
}

/// `left.den * right.num - left.num * right.den`; positive iff `right > left`.
pub fn cross_difference(left: &Fraction, right: &Fraction) -> BigInt {
    BigInt::from(&left.den * &right.num) - BigInt::from(&left.num * &right.den)
}

/// The `k - 1` weighted mediants of `left` and `right`, in increasing order.
///
/// The j-th raw mediant is `((k-j)·a + j·c) / ((k-j)·b + j·d)` for
/// `left = a/b`, `right = c/d`. With `reduce` set each one is brought to
/// lowest terms and carries its reduction factor.
///
/// Panics if `k < 2`.
pub fn weighted_mediants(k: u32, left: &Fraction, right: &Fraction, reduce: bool) -> Vec<Mediant> {
    assert!(k >= 2, "mediant weight must be at least 2, got {k}");
    (1..k)
        .map(|j| {
            let wl = BigUint::from(k - j);
            let wr = BigUint::from(j);
            let raw = Fraction { num: &wl * &left.num + &wr * &right.num, den: &wl * &left.den + &wr * &right.den };
            if reduce {
                let ReductionResult { reduced, factor } = raw.reduce();
                Mediant { fraction: reduced, factor }
            } else {
                Mediant { fraction: raw, factor: BigUint::one() }
            }
        })
        .collect()
}
