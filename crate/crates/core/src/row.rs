//! Row generation for weighted-mediant Stern-Brocot sequences.
//!
//! Every gap between two adjacent fractions expands independently of its
//! neighbours, so a row is emitted by a depth-first walk over gaps. Memory
//! stays proportional to `n * k` no matter how long the row is.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use thiserror::Error;

use crate::fraction::{weighted_mediants, Fraction, Mediant};

/// Largest row emitted for k = 3 unless a caller raises the cap.
pub const DEFAULT_UNIT_ROW_CAP: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RowError {
    #[error("mediant weight k must be at least 2, got {0}")]
    InvalidWeight(u32),
    #[error("start pair {left}, {right} is not strictly increasing")]
    StartNotIncreasing { left: Fraction, right: Fraction },
    #[error("row {n} exceeds the configured cap of {cap}")]
    ResourceLimit { n: u32, cap: u32 },
}

/// Parameters of one row `SB_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSpec {
    pub k: u32,
    pub start_left: Fraction,
    pub start_right: Fraction,
    pub reduce: bool,
    pub n: u32,
}

impl RowSpec {
    /// k = 3, start pair `0/1, 1/1`, reduced fractions.
    pub fn unit(n: u32) -> Self {
        RowSpec { k: 3, start_left: Fraction::zero(), start_right: Fraction::one(), reduce: true, n }
    }

    pub fn new(k: u32, start_left: Fraction, start_right: Fraction, reduce: bool, n: u32) -> Result<Self, RowError> {
        let spec = RowSpec { k, start_left, start_right, reduce, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), RowError> {
        if self.k < 2 {
            return Err(RowError::InvalidWeight(self.k));
        }
        if self.start_left.value_cmp(&self.start_right).is_ge() {
            return Err(RowError::StartNotIncreasing {
                left: self.start_left.clone(),
                right: self.start_right.clone(),
            });
        }
        Ok(())
    }

    pub fn is_unit(&self) -> bool {
        self.k == 3 && self.reduce && self.start_left == Fraction::zero() && self.start_right == Fraction::one()
    }

    pub fn with_n(&self, n: u32) -> Self {
        RowSpec { n, ..self.clone() }
    }
}

/// Largest `n` with `k^n <= 3^20`, so every weight gets roughly the same
/// emission budget as the k = 3 default.
pub fn default_row_cap(k: u32) -> u32 {
    let budget = 3u64.pow(DEFAULT_UNIT_ROW_CAP);
    let mut n = 0;
    let mut size = 1u64;
    while let Some(next) = size.checked_mul(u64::from(k.max(2))) {
        if next > budget {
            break;
        }
        size = next;
        n += 1;
    }
    n
}

/// Number of fractions in `SB_n`: `k^n + 1`.
pub fn row_size(spec: &RowSpec) -> BigUint {
    BigUint::from(spec.k).pow(spec.n) + BigUint::one()
}

/// A gap between two adjacent fractions of row `depth`, at position `index`
/// among that row's gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    pub depth: u32,
    pub index: u64,
    pub left: Fraction,
    pub right: Fraction,
}

/// One mediant insertion: the gap of row `gap.depth` and the `k - 1`
/// mediants placed into it in row `gap.depth + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub gap: Gap,
    pub mediants: Vec<Mediant>,
}

/// Preorder walk over every gap of rows `0..=n`.
struct GapWalker {
    k: u32,
    reduce: bool,
    n: u32,
    stack: Vec<Gap>,
}

impl GapWalker {
    fn new(spec: &RowSpec) -> Self {
        let root = Gap { depth: 0, index: 0, left: spec.start_left.clone(), right: spec.start_right.clone() };
        GapWalker { k: spec.k, reduce: spec.reduce, n: spec.n, stack: vec![root] }
    }
}

impl Iterator for GapWalker {
    type Item = (Gap, Option<Vec<Mediant>>);

    fn next(&mut self) -> Option<Self::Item> {
        let gap = self.stack.pop()?;
        if gap.depth == self.n {
            return Some((gap, None));
        }
        let mediants = weighted_mediants(self.k, &gap.left, &gap.right, self.reduce);
        let mut points = Vec::with_capacity(mediants.len() + 2);
        points.push(&gap.left);
        points.extend(mediants.iter().map(|m| &m.fraction));
        points.push(&gap.right);
        let k = u64::from(self.k);
        for j in (0..points.len() - 1).rev() {
            self.stack.push(Gap {
                depth: gap.depth + 1,
                index: gap.index * k + j as u64,
                left: points[j].clone(),
                right: points[j + 1].clone(),
            });
        }
        Some((gap, Some(mediants)))
    }
}

fn check_cap(spec: &RowSpec, cap: u32) -> Result<(), RowError> {
    spec.validate()?;
    let fits = u64::from(spec.k).checked_pow(spec.n).is_some();
    if spec.n > cap || !fits {
        return Err(RowError::ResourceLimit { n: spec.n, cap });
    }
    Ok(())
}

/// Single-pass, left-to-right emission of the fractions of `SB_n`.
pub struct RowStream {
    first: Option<Fraction>,
    walker: GapWalker,
}

impl Iterator for RowStream {
    type Item = Fraction;

    fn next(&mut self) -> Option<Fraction> {
        if let Some(first) = self.first.take() {
            return Some(first);
        }
        self.walker.by_ref().find_map(|(gap, mediants)| mediants.is_none().then_some(gap.right))
    }
}

/// Streams `SB_n` under the default cap for the given weight.
pub fn generate_row(spec: &RowSpec) -> Result<RowStream, RowError> {
    generate_row_capped(spec, default_row_cap(spec.k))
}

pub fn generate_row_capped(spec: &RowSpec, cap: u32) -> Result<RowStream, RowError> {
    check_cap(spec, cap)?;
    Ok(RowStream { first: Some(spec.start_left.clone()), walker: GapWalker::new(spec) })
}

/// The `k^n` adjacent pairs of `SB_n`, left to right.
pub fn row_gaps(spec: &RowSpec) -> Result<impl Iterator<Item = Gap>, RowError> {
    check_cap(spec, default_row_cap(spec.k))?;
    Ok(GapWalker::new(spec).filter_map(|(gap, mediants)| mediants.is_none().then_some(gap)))
}

/// Every mediant construction that builds rows `1..=n`: one entry per gap of
/// rows `0..n`, in depth-first order.
pub fn expansions(spec: &RowSpec) -> Result<impl Iterator<Item = Expansion>, RowError> {
    check_cap(spec, default_row_cap(spec.k))?;
    Ok(GapWalker::new(spec).filter_map(|(gap, mediants)| mediants.map(|mediants| Expansion { gap, mediants })))
}

/// Where a fraction first shows up: row number and 0-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPosition {
    pub row: u32,
    pub index: BigUint,
}

/// First unit row `<= max_n` containing `target`, found by descending
/// through the single gap that brackets it in each row.
pub fn find_fraction(target: &Fraction, max_n: u32) -> Option<RowPosition> {
    find_fraction_from(&RowSpec::unit(0), target, max_n)
}

/// [`find_fraction`] for an arbitrary weight and start pair. `template.n` is ignored.
pub fn find_fraction_from(template: &RowSpec, target: &Fraction, max_n: u32) -> Option<RowPosition> {
    let mut left = template.start_left.clone();
    let mut right = template.start_right.clone();
    if target.value_eq(&left) {
        return Some(RowPosition { row: 0, index: BigUint::from(0u32) });
    }
    if target.value_eq(&right) {
        return Some(RowPosition { row: 0, index: BigUint::one() });
    }
    if target.value_cmp(&left).is_lt() || target.value_cmp(&right).is_gt() {
        return None;
    }
    let k = BigUint::from(template.k);
    let mut gap_index = BigUint::from(0u32);
    for row in 1..=max_n {
        let mediants = weighted_mediants(template.k, &left, &right, template.reduce);
        let mut lower = left;
        let mut slot = mediants.len();
        for (j, m) in mediants.iter().enumerate() {
            match target.value_cmp(&m.fraction) {
                std::cmp::Ordering::Equal => {
                    return Some(RowPosition { row, index: &gap_index * &k + BigUint::from(j + 1) });
                }
                std::cmp::Ordering::Less => {
                    slot = j;
                    break;
                }
                std::cmp::Ordering::Greater => lower = m.fraction.clone(),
            }
        }
        if slot < mediants.len() {
            right = mediants[slot].fraction.clone();
        }
        left = lower;
        gap_index = gap_index * &k + BigUint::from(slot);
    }
    None
}

/// Reference search: generates each row in full and scans it.
pub fn find_fraction_by_scan(target: &Fraction, max_n: u32) -> Option<RowPosition> {
    (0..=max_n).find_map(|row| {
        let stream = generate_row(&RowSpec::unit(row)).ok()?;
        stream.enumerate().find(|(_, f)| f.value_eq(target)).map(|(i, _)| RowPosition { row, index: BigUint::from(i) })
    })
}
