//! Cross-difference values straight from the ternary digits of an index.
//!
//! Runtime is linear in the digit count, so indices far beyond any row that
//! could be generated (10^100 and up) are cheap.

use num_bigint::BigUint;
use num_traits::{Pow, Zero};
use thiserror::Error;

use crate::crossdiff::pow3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("index {value} does not fit in {width} ternary digits")]
    WidthMismatch { value: BigUint, width: usize },
    #[error("{0} is not a ternary digit")]
    BadDigit(u8),
    #[error("malformed decimal index {0:?}")]
    MalformedIndex(String),
}

/// An index together with its most-significant-first base-3 digits,
/// zero-padded to `width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryIndex {
    value: BigUint,
    digits: Vec<u8>,
}

impl TernaryIndex {
    pub fn new(value: BigUint, width: usize) -> Result<Self, OracleError> {
        let raw = if value.is_zero() { Vec::new() } else { value.to_radix_be(3) };
        if raw.len() > width {
            return Err(OracleError::WidthMismatch { value, width });
        }
        let mut digits = vec![0; width - raw.len()];
        digits.extend(raw);
        Ok(TernaryIndex { value, digits })
    }

    /// Natural width: the digit count of `value`, with 0 taking one digit.
    pub fn unpadded(value: BigUint) -> Self {
        let width = if value.is_zero() { 1 } else { value.to_radix_be(3).len() };
        TernaryIndex::new(value, width).expect("natural width always fits")
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self, OracleError> {
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(OracleError::BadDigit(d));
        }
        let value = digits.iter().fold(BigUint::zero(), |acc, &d| acc * 3u32 + d);
        Ok(TernaryIndex { value, digits: digits.to_vec() })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn width(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Number of 1 digits. Zero padding never adds any.
    pub fn ones_count(&self) -> u32 {
        self.digits.iter().filter(|&&d| d == 1).count() as u32
    }

    /// 1-based position of the first digit that is not 1; `None` for the
    /// all-ones middle index of a row.
    pub fn middleness(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d != 1).map(|p| p + 1)
    }
}

/// Accepts a plain decimal string of ASCII digits.
pub fn parse_index(s: &str) -> Result<BigUint, OracleError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(OracleError::MalformedIndex(s.to_string()));
    }
    s.parse().map_err(|_| OracleError::MalformedIndex(s.to_string()))
}

/// `n(i)`, the exponent of the no-reduction cross-difference at `i`.
pub fn no_reduction_exponent(i: &BigUint) -> u32 {
    TernaryIndex::unpadded(i.clone()).ones_count()
}

/// `3^{n(i)}`.
pub fn no_reduction_value(i: &BigUint) -> BigUint {
    pow3(no_reduction_exponent(i))
}

/// Base-3 exponent of the unit-case cross-difference at the index spelled
/// by `digits` in a row of width `digits.len()`.
///
/// While the middleness `m` is at most `ceil(width / 2)` the index sits in
/// a copy of a shorter row, so the leading `2m - 1` digits are dropped.
/// Otherwise the index is on the steeple and the value is `3^{2m - width - 1}`,
/// or `3^width` at the exact middle.
pub fn unit_exponent_of_digits(digits: &[u8]) -> u32 {
    let mut rest = digits;
    loop {
        let width = rest.len();
        if width == 0 {
            return 0;
        }
        let Some(first_other) = rest.iter().position(|&d| d != 1) else {
            return width as u32;
        };
        let m = first_other + 1;
        if m > width.div_ceil(2) {
            return (2 * m - width - 1) as u32;
        }
        rest = &rest[2 * m - 1..];
    }
}

pub fn unit_exponent(t: &TernaryIndex) -> u32 {
    unit_exponent_of_digits(t.digits())
}

/// `C_n(i)` for the unit case, from digits alone.
pub fn unit_value(i: &BigUint, n: u32) -> Result<BigUint, OracleError> {
    let t = TernaryIndex::new(i.clone(), n as usize)?;
    Ok(pow3(unit_exponent(&t)))
}

/// Exponent of the row-independent value at `i`.
pub fn infinite_unit_exponent(i: &BigUint) -> u32 {
    unit_exponent(&TernaryIndex::unpadded(i.clone()))
}

/// The unit-case cross-difference at `i`, valid for every row that holds `i`.
pub fn infinite_unit_value(i: &BigUint) -> BigUint {
    pow3(infinite_unit_exponent(i))
}

/// `3^n` as a `BigUint`; the length of row `n`.
pub fn row_len(n: u32) -> BigUint {
    BigUint::from(3u32).pow(n)
}
