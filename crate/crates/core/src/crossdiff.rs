//! Cross-difference rows `C_n` and the rules that propagate them.
//!
//! Three routes produce the same unit-case row: differencing the generated
//! fractions, iterating [`propagate_unit`] from `C_0 = {1}`, and the ternary
//! index oracle in [`crate::oracle`].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::fraction::cross_difference;
use crate::row::{row_gaps, RowError, RowSpec};

/// Rows longer than `3^16` are never materialized here.
pub const MATERIALIZE_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrossDiffError {
    #[error(transparent)]
    Row(#[from] RowError),
    #[error("row {n} is past the materialization cap of {cap}")]
    TooLarge { n: u32, cap: u32 },
    #[error("index {index} is out of range for a row of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("value {value} at index {index} is not divisible by 3; the input is not a unit row")]
    NotDivisible { index: usize, value: BigUint },
    #[error("row {0} has no steeple: its middle value is 1 or the row has no middle")]
    NoSteeple(u32),
    #[error("the unit propagation rule only applies to k = 3, got k = {0}")]
    WrongWeight(u32),
}

/// The ordered cross-differences of adjacent fractions in row `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossDiffRow {
    n: u32,
    values: Vec<BigUint>,
}

impl CrossDiffRow {
    pub fn new(n: u32, values: Vec<BigUint>) -> Self {
        CrossDiffRow { n, values }
    }

    /// `C_0 = {1}`.
    pub fn seed() -> Self {
        CrossDiffRow { n: 0, values: vec![BigUint::one()] }
    }

    pub fn from_u64(n: u32, values: &[u64]) -> Self {
        CrossDiffRow { n, values: values.iter().map(|&v| BigUint::from(v)).collect() }
    }

    /// Builds the row `3^e` for each exponent.
    pub fn from_exponents(n: u32, exponents: &[u32]) -> Self {
        CrossDiffRow { n, values: exponents.iter().map(|&e| pow3(e)).collect() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn middle_index(&self) -> usize {
        self.values.len() / 2
    }

    /// Base-3 exponents, or `None` if some value is not a power of 3.
    pub fn exponents(&self) -> Option<Vec<u32>> {
        self.values.iter().map(log3_exact).collect()
    }

    pub fn is_palindrome(&self) -> bool {
        self.values.iter().eq(self.values.iter().rev())
    }
}

pub fn pow3(e: u32) -> BigUint {
    num_traits::pow(BigUint::from(3u32), e as usize)
}

/// `Some(e)` when `v == 3^e`.
pub fn log3_exact(v: &BigUint) -> Option<u32> {
    if v.is_zero() {
        return None;
    }
    let three = BigUint::from(3u32);
    let mut v = v.clone();
    let mut e = 0;
    while !v.is_one() {
        let (q, r) = v.div_rem(&three);
        if !r.is_zero() {
            return None;
        }
        v = q;
        e += 1;
    }
    Some(e)
}

/// Differences adjacent fractions of the generated row.
pub fn crossdiffs_from_fractions(spec: &RowSpec) -> Result<CrossDiffRow, CrossDiffError> {
    if spec.n > MATERIALIZE_CAP {
        return Err(CrossDiffError::TooLarge { n: spec.n, cap: MATERIALIZE_CAP });
    }
    let values = row_gaps(spec)?
        .map(|gap| {
            let cd: BigInt = cross_difference(&gap.left, &gap.right);
            cd.to_biguint().expect("adjacent fractions are strictly increasing")
        })
        .collect();
    Ok(CrossDiffRow { n: spec.n, values })
}

/// Each value `C` becomes `C, 3C, C`.
pub fn propagate_no_reduction(row: &CrossDiffRow) -> CrossDiffRow {
    let three = BigUint::from(3u32);
    let values = row.values.iter().flat_map(|v| [v.clone(), v * &three, v.clone()]).collect();
    CrossDiffRow { n: row.n + 1, values }
}

/// True iff `values[i]` is strictly greater than each neighbour that exists.
/// A one-element row is vacuously a strict maximum.
pub fn is_strict_local_max(row: &CrossDiffRow, i: usize) -> Result<bool, CrossDiffError> {
    let values = &row.values;
    let v = values.get(i).ok_or(CrossDiffError::IndexOutOfRange { index: i, len: values.len() })?;
    let left_ok = i == 0 || values[i - 1] < *v;
    let right_ok = values.get(i + 1).is_none_or(|r| r < v);
    Ok(left_ok && right_ok)
}

/// One step of the unit-case rule: a value of 1 or a strict local maximum
/// `V` becomes `V, 3V, V`; anything else becomes `V/3, V/3, V/3`.
pub fn propagate_unit(row: &CrossDiffRow) -> Result<CrossDiffRow, CrossDiffError> {
    let three = BigUint::from(3u32);
    let mut values = Vec::with_capacity(row.values.len() * 3);
    for (i, v) in row.values.iter().enumerate() {
        if v.is_one() || is_strict_local_max(row, i)? {
            values.extend([v.clone(), v * &three, v.clone()]);
        } else {
            let (q, r) = v.div_rem(&three);
            if !r.is_zero() {
                return Err(CrossDiffError::NotDivisible { index: i, value: v.clone() });
            }
            values.extend([q.clone(), q.clone(), q]);
        }
    }
    Ok(CrossDiffRow { n: row.n + 1, values })
}

/// Applies [`propagate_unit`] `n` times to `C_0`.
pub fn unit_row_by_rule(n: u32) -> Result<CrossDiffRow, CrossDiffError> {
    if n > MATERIALIZE_CAP {
        return Err(CrossDiffError::TooLarge { n, cap: MATERIALIZE_CAP });
    }
    (0..n).try_fold(CrossDiffRow::seed(), |row, _| propagate_unit(&row))
}

/// Applies [`propagate_no_reduction`] `n` times to `C_0`.
pub fn no_reduction_row(n: u32) -> Result<CrossDiffRow, CrossDiffError> {
    if n > MATERIALIZE_CAP {
        return Err(CrossDiffError::TooLarge { n, cap: MATERIALIZE_CAP });
    }
    Ok((0..n).fold(CrossDiffRow::seed(), |row, _| propagate_no_reduction(&row)))
}

/// The maximal run around the middle index that contains no 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Steeple {
    pub start: usize,
    /// Inclusive.
    pub end: usize,
    pub values: Vec<BigUint>,
}

pub fn extract_steeple(row: &CrossDiffRow) -> Result<Steeple, CrossDiffError> {
    let values = &row.values;
    if values.len().is_multiple_of(2) {
        return Err(CrossDiffError::NoSteeple(row.n));
    }
    let mid = row.middle_index();
    if values[mid].is_one() {
        return Err(CrossDiffError::NoSteeple(row.n));
    }
    let start = values[..mid].iter().rposition(|v| v.is_one()).map_or(0, |p| p + 1);
    let end = values[mid..].iter().position(|v| v.is_one()).map_or(values.len(), |p| mid + p) - 1;
    Ok(Steeple { start, end, values: values[start..=end].to_vec() })
}

/// Outcome of applying the unit rule to a non-unit start pair for one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleProbe {
    pub n: u32,
    /// Positions where the rule's prediction differs from the generated row.
    pub mismatches: Vec<usize>,
    pub rule_error: Option<CrossDiffError>,
}

impl RuleProbe {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty() && self.rule_error.is_none()
    }
}

/// Empirical comparison mode: for each `n` in `1..=max_n`, applies the unit
/// rule to the fraction-derived `C_{n-1}` of `template` and diffs the result
/// against the fraction-derived `C_n`. Reports, never asserts.
pub fn probe_unit_rule(template: &RowSpec, max_n: u32) -> Result<Vec<RuleProbe>, CrossDiffError> {
    if template.k != 3 {
        return Err(CrossDiffError::WrongWeight(template.k));
    }
    let mut previous = crossdiffs_from_fractions(&template.with_n(0))?;
    let mut probes = Vec::new();
    for n in 1..=max_n {
        let actual = crossdiffs_from_fractions(&template.with_n(n))?;
        let probe = match propagate_unit(&previous) {
            Ok(predicted) => RuleProbe {
                n,
                mismatches: (0..actual.len()).filter(|&i| predicted.values[i] != actual.values[i]).collect(),
                rule_error: None,
            },
            Err(e) => RuleProbe { n, mismatches: Vec::new(), rule_error: Some(e) },
        };
        probes.push(probe);
        previous = actual;
    }
    Ok(probes)
}

/// Convenience for tests and reports: the value at `i` as `u64` when it fits.
pub fn value_u64(row: &CrossDiffRow, i: usize) -> Option<u64> {
    row.values.get(i).and_then(|v| v.to_u64())
}
