//! Counting formulas, peak classification, the mod-9 census and reduction
//! statistics for unit rows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::crossdiff::{is_strict_local_max, log3_exact, pow3, CrossDiffRow};
use crate::fraction::{cross_difference, Fraction};
use crate::row::{expansions, row_gaps, RowError, RowSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error(transparent)]
    Row(#[from] RowError),
    #[error("value {value} at index {index} is not a power of 3")]
    NotPowerOfThree { index: usize, value: BigUint },
}

/// `a(n) = 3^n - (-1)^n`.
pub fn a_seq(n: u32) -> BigUint {
    let p = pow3(n);
    if n.is_multiple_of(2) {
        p - 1u32
    } else {
        p + 1u32
    }
}

/// `b(n) = 0^n`: 1 at zero, 0 elsewhere.
pub fn b_seq(n: u32) -> BigUint {
    if n == 0 {
        BigUint::one()
    } else {
        BigUint::zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    /// The value counted is `3^exponent`.
    pub exponent: u32,
    pub total: BigUint,
    pub peaks: BigUint,
    pub non_peaks: BigUint,
}

/// Occurrences of each power of 3 in one row, split into peaks and non-peaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsTable {
    pub n: u32,
    /// One entry per exponent `0..=n`.
    pub rows: Vec<CountRow>,
}

impl CountsTable {
    pub fn get(&self, exponent: u32) -> Option<&CountRow> {
        self.rows.get(exponent as usize)
    }

    pub fn grand_total(&self) -> BigUint {
        self.rows.iter().map(|r| &r.total).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "rows": self.rows.iter().map(|r| json!({
                "value": pow3(r.exponent).to_string(),
                "log3": r.exponent,
                "total": r.total.to_string(),
                "peaks": r.peaks.to_string(),
                "non_peaks": r.non_peaks.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:>6} {:>14} {:>14} {:>14} {:>14}", "log3", "value", "total", "peaks", "non-peaks");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>6} {:>14} {:>14} {:>14} {:>14}",
                r.exponent,
                pow3(r.exponent).to_string(),
                r.total.to_string(),
                r.peaks.to_string(),
                r.non_peaks.to_string()
            );
        }
        out
    }
}

/// Closed-form counts for unit row `n`.
///
/// For `3^k`, `k > 0`: total `b(n-k) + a(n-k)`, peaks `b(n-k) + a(n-k)/2`,
/// non-peaks `a(n-k)/2`. Ones total `b(n) + a(n)/2`; a 1 can only be a
/// strict maximum in the one-element row `C_0`, so ones have `b(n)` peaks.
pub fn predicted_counts(n: u32) -> CountsTable {
    let rows = (0..=n)
        .map(|k| {
            let half = a_seq(n - k) / 2u32;
            let b = b_seq(n - k);
            if k == 0 {
                CountRow { exponent: 0, total: &b + &half, peaks: b, non_peaks: half }
            } else {
                let full = a_seq(n - k);
                CountRow { exponent: k, total: &b + full, peaks: b + &half, non_peaks: half }
            }
        })
        .collect();
    CountsTable { n, rows }
}

/// Tallies a row by value, classifying each index with the strict-local-max rule.
pub fn observed_counts(row: &CrossDiffRow) -> Result<CountsTable, AnalyticsError> {
    let exponents = row
        .values()
        .iter()
        .enumerate()
        .map(|(index, value)| {
            log3_exact(value).ok_or_else(|| AnalyticsError::NotPowerOfThree { index, value: value.clone() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let top = exponents.iter().copied().max().unwrap_or(0).max(row.n());
    let mut rows: Vec<CountRow> = (0..=top)
        .map(|exponent| CountRow {
            exponent,
            total: BigUint::zero(),
            peaks: BigUint::zero(),
            non_peaks: BigUint::zero(),
        })
        .collect();
    for (index, e) in exponents.into_iter().enumerate() {
        let slot = &mut rows[e as usize];
        slot.total += 1u32;
        if is_strict_local_max(row, index).expect("index in range") {
            slot.peaks += 1u32;
        } else {
            slot.non_peaks += 1u32;
        }
    }
    Ok(CountsTable { n: row.n(), rows })
}

/// `(3^n - (-1)^n) / (2 * 3^n)`, the exact share of ones in row `n >= 1`.
pub fn ones_fraction(n: u32) -> BigRational {
    let ones = BigInt::from(a_seq(n) / 2u32);
    BigRational::new(ones, BigInt::from(pow3(n)))
}

/// How a consecutive pair looks modulo 9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mod9Class {
    CdOne,
    CdThree,
    CdSix,
    /// `cd ≡ 0` and `c/d ≡ a/b`.
    CdZeroSame,
    /// `cd ≡ 0` and `(a + c)/(b + d) ≡ 0/0`.
    CdZeroComplementary,
    Other,
}

impl Mod9Class {
    pub const ALL: [Mod9Class; 6] = [
        Mod9Class::CdOne,
        Mod9Class::CdThree,
        Mod9Class::CdSix,
        Mod9Class::CdZeroSame,
        Mod9Class::CdZeroComplementary,
        Mod9Class::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mod9Class::CdOne => "cd=1",
            Mod9Class::CdThree => "cd=3",
            Mod9Class::CdSix => "cd=6",
            Mod9Class::CdZeroSame => "cd=0-same",
            Mod9Class::CdZeroComplementary => "cd=0-complementary",
            Mod9Class::Other => "other",
        }
    }
}

/// Numerator and denominator reduced modulo 9.
pub type Residue = (u8, u8);

pub fn residue(f: &Fraction) -> Residue {
    let nine = BigUint::from(9u32);
    let r = |x: &BigUint| (x % &nine).to_u8().expect("residue below 9");
    (r(f.num()), r(f.den()))
}

pub fn classify_pair(left: &Fraction, right: &Fraction) -> Mod9Class {
    let cd = cross_difference(left, right).mod_floor(&BigInt::from(9));
    let (a, b) = residue(left);
    let (c, d) = residue(right);
    match cd.to_u8().expect("residue below 9") {
        1 => Mod9Class::CdOne,
        3 => Mod9Class::CdThree,
        6 => Mod9Class::CdSix,
        0 if (a, b) == (c, d) => Mod9Class::CdZeroSame,
        0 if (a + c) % 9 == 0 && (b + d) % 9 == 0 => Mod9Class::CdZeroComplementary,
        _ => Mod9Class::Other,
    }
}

/// Result of scanning consecutive pairs of unit rows `1..=max_n` modulo 9.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Mod9Census {
    pub max_n: u32,
    pub pairs: u64,
    pub classes: BTreeMap<Mod9Class, u64>,
    /// Residues seen right after each left-hand residue.
    pub followers: BTreeMap<Residue, BTreeSet<Residue>>,
    /// First pair with `cd ≡ 0 (mod 9)` that is neither same nor complementary.
    pub first_violation: Option<(u32, u64, Fraction, Fraction)>,
    /// Same-residue `cd ≡ 0` pairs whose mediants both reduce by exactly 3.
    pub same_reducing: u64,
    /// Complementary `cd ≡ 0` pairs whose mediants stay unreduced.
    pub complementary_unreduced: u64,
    /// First `cd ≡ 0` pair whose mediant factors contradict the prediction.
    pub first_prediction_failure: Option<(u32, u64, Fraction, Fraction)>,
}

impl Mod9Census {
    pub fn count(&self, class: Mod9Class) -> u64 {
        self.classes.get(&class).copied().unwrap_or(0)
    }

    pub fn violations(&self) -> u64 {
        self.count(Mod9Class::Other)
    }

    pub fn max_followers(&self) -> usize {
        self.followers.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn passed(&self) -> bool {
        self.first_violation.is_none() && self.first_prediction_failure.is_none()
    }

    pub fn to_json(&self) -> Value {
        let classes: serde_json::Map<_, _> =
            Mod9Class::ALL.iter().map(|c| (c.name().to_string(), json!(self.count(*c)))).collect();
        let followers: serde_json::Map<_, _> =
            self.followers.iter().map(|((a, b), set)| (format!("{a}/{b}"), json!(set.len()))).collect();
        json!({
            "max_n": self.max_n,
            "pairs": self.pairs,
            "classes": classes,
            "max_followers": self.max_followers(),
            "followers": followers,
            "same_reducing": self.same_reducing,
            "complementary_unreduced": self.complementary_unreduced,
            "violation": self.first_violation.as_ref().map(|(r, i, a, b)| format!("row {r} gap {i}: {a}, {b}")),
            "prediction_failure": self.first_prediction_failure.as_ref().map(|(r, i, a, b)| format!("row {r} gap {i}: {a}, {b}")),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mod-9 census, unit rows 1..={} ({} pairs)", self.max_n, self.pairs);
        for c in Mod9Class::ALL {
            let _ = writeln!(out, "  {:<20} {:>10}", c.name(), self.count(c));
        }
        let _ = writeln!(out, "  {:<20} {:>10}", "residue classes", self.followers.len());
        let _ = writeln!(out, "  {:<20} {:>10}", "max followers", self.max_followers());
        let _ = writeln!(out, "  {:<20} {:>10}", "same, reduce by 3", self.same_reducing);
        let _ = writeln!(out, "  {:<20} {:>10}", "compl., no reduce", self.complementary_unreduced);
        out
    }
}

/// Exhaustive scan of consecutive pairs in unit rows `1..=max_n`.
///
/// Every pair with cross-difference divisible by 9 must be same or
/// complementary modulo 9, and its mediants must reduce by exactly 3 in the
/// first case and not at all in the second.
pub fn mod9_census(max_n: u32) -> Result<Mod9Census, AnalyticsError> {
    let mut census = Mod9Census { max_n, ..Default::default() };
    for n in 1..=max_n {
        for gap in row_gaps(&RowSpec::unit(n))? {
            census.pairs += 1;
            let class = classify_pair(&gap.left, &gap.right);
            *census.classes.entry(class).or_insert(0) += 1;
            census.followers.entry(residue(&gap.left)).or_default().insert(residue(&gap.right));
            let record = || (n, gap.index, gap.left.clone(), gap.right.clone());
            match class {
                Mod9Class::Other => {
                    census.first_violation.get_or_insert_with(record);
                }
                Mod9Class::CdZeroSame | Mod9Class::CdZeroComplementary => {
                    let factors: Vec<BigUint> = crate::fraction::weighted_mediants(3, &gap.left, &gap.right, true)
                        .into_iter()
                        .map(|m| m.factor)
                        .collect();
                    let want = if class == Mod9Class::CdZeroSame { 3u32 } else { 1 };
                    if factors.iter().all(|f| *f == BigUint::from(want)) {
                        if class == Mod9Class::CdZeroSame {
                            census.same_reducing += 1;
                        } else {
                            census.complementary_unreduced += 1;
                        }
                    } else {
                        census.first_prediction_failure.get_or_insert_with(record);
                    }
                }
                _ => {}
            }
        }
    }
    Ok(census)
}

/// Tally of every mediant construction that builds unit rows `1..=max_n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionCensus {
    pub max_n: u32,
    pub constructions: u64,
    /// Reduction factor -> number of mediants reduced by it.
    pub factors: BTreeMap<BigUint, u64>,
    /// Constructions whose left and right mediants reduce by different factors.
    pub asymmetric: u64,
    /// Constructions where a factor fails to divide the parents' cross-difference.
    pub non_dividing: u64,
    /// Reducing constructions whose numerators `a, x, z, c` form a strictly
    /// monotone progression (likewise denominators).
    pub reducing: u64,
    pub monotone_numerators: u64,
    pub unit_step_numerators: u64,
    pub monotone_denominators: u64,
    pub unit_step_denominators: u64,
    pub first_bad: Option<String>,
}

impl ReductionCensus {
    pub fn only_one_and_three(&self) -> bool {
        self.factors.keys().all(|f| *f == BigUint::one() || *f == BigUint::from(3u32))
    }

    pub fn passed(&self) -> bool {
        self.only_one_and_three() && self.asymmetric == 0 && self.non_dividing == 0
    }
}

fn step_kind(seq: [&BigUint; 4]) -> (bool, bool) {
    let inc = seq.windows(2).all(|w| w[0] < w[1]);
    let dec = seq.windows(2).all(|w| w[0] > w[1]);
    let unit = seq.windows(2).all(|w| {
        let d = if w[0] < w[1] { w[1] - w[0] } else { w[0] - w[1] };
        d.is_one()
    });
    (inc || dec, unit)
}

pub fn reduction_census(max_n: u32) -> Result<ReductionCensus, AnalyticsError> {
    let mut census = ReductionCensus { max_n, ..Default::default() };
    for e in expansions(&RowSpec::unit(max_n))? {
        census.constructions += 1;
        let (left, right) = (&e.gap.left, &e.gap.right);
        let cd = cross_difference(left, right).to_biguint().expect("increasing pair");
        for m in &e.mediants {
            *census.factors.entry(m.factor.clone()).or_insert(0) += 1;
            if !(&cd % &m.factor).is_zero() {
                census.non_dividing += 1;
            }
        }
        let (x, z) = (&e.mediants[0], &e.mediants[1]);
        if x.factor != z.factor {
            census.asymmetric += 1;
            census.first_bad.get_or_insert_with(|| format!("row {} gap {}: {left}, {right}", e.gap.depth, e.gap.index));
        }
        if !x.factor.is_one() {
            census.reducing += 1;
            let (mono, unit) = step_kind([left.num(), x.fraction.num(), z.fraction.num(), right.num()]);
            census.monotone_numerators += u64::from(mono);
            census.unit_step_numerators += u64::from(unit);
            let (mono, unit) = step_kind([left.den(), x.fraction.den(), z.fraction.den(), right.den()]);
            census.monotone_denominators += u64::from(mono);
            census.unit_step_denominators += u64::from(unit);
        }
    }
    Ok(census)
}

/// An OEIS prefix next to the values computed here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OeisCheck {
    pub id: &'static str,
    pub description: &'static str,
    pub expected: &'static [u64],
    pub computed: Vec<BigUint>,
}

impl OeisCheck {
    pub fn matches(&self) -> bool {
        self.expected.len() == self.computed.len()
            && self.expected.iter().zip(&self.computed).all(|(e, c)| BigUint::from(*e) == *c)
    }
}

/// OEIS A105723, a(n) = 3^n - (-1)^n, from n = 0.
pub const A105723_PREFIX: [u64; 8] = [0, 4, 8, 28, 80, 244, 728, 2188];

/// OEIS A152011, 1 at n = 0 then (3^n - (-1)^n)/2: ones per unit row.
pub const A152011_PREFIX: [u64; 7] = [1, 2, 4, 14, 40, 122, 364];

/// Computes both prefixes: `a(n)` from its formula, the ones counts by
/// tallying the oracle over every index of each row.
pub fn oeis_report() -> Vec<OeisCheck> {
    let a = (0..A105723_PREFIX.len() as u32).map(a_seq).collect();
    let ones = (0..A152011_PREFIX.len() as u32)
        .map(|n| {
            let count = (0..3u64.pow(n))
                .filter(|&i| crate::oracle::unit_value(&BigUint::from(i), n).is_ok_and(|v| v.is_one()))
                .count();
            BigUint::from(count)
        })
        .collect();
    vec![
        OeisCheck { id: "A105723", description: "a(n) = 3^n - (-1)^n", expected: &A105723_PREFIX, computed: a },
        OeisCheck { id: "A152011", description: "ones in unit row n", expected: &A152011_PREFIX, computed: ones },
    ]
}
