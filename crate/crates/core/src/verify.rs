//! Named verification suites. Each runs exhaustively up to a row bound and
//! stops at the first counterexample.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::analytics::{
    a_seq, b_seq, mod9_census, observed_counts, oeis_report, ones_fraction, predicted_counts, reduction_census,
};
use crate::crossdiff::{
    crossdiffs_from_fractions, extract_steeple, is_strict_local_max, no_reduction_row, pow3, propagate_unit,
    CrossDiffRow, MATERIALIZE_CAP,
};
use crate::fraction::Fraction;
use crate::oracle::{no_reduction_value, unit_exponent_of_digits, unit_value, TernaryIndex};
use crate::render::cantor_bitmap;
use crate::row::{expansions, find_fraction, generate_row, RowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Reduction,
    Counts,
    Mod9,
    Palindrome,
    OracleEquivalence,
    Completeness,
    Steeples,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Reduction,
        Suite::Counts,
        Suite::Mod9,
        Suite::Palindrome,
        Suite::OracleEquivalence,
        Suite::Completeness,
        Suite::Steeples,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Reduction => "reduction",
            Suite::Counts => "counts",
            Suite::Mod9 => "mod9",
            Suite::Palindrome => "palindrome",
            Suite::OracleEquivalence => "oracle-equivalence",
            Suite::Completeness => "completeness",
            Suite::Steeples => "steeples",
        }
    }

    /// Row bound used when the caller does not give one.
    pub fn default_max_n(self) -> u32 {
        match self {
            Suite::Mod9 | Suite::Completeness => 8,
            Suite::OracleEquivalence => 9,
            _ => 10,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = if s == "oracle" { "oracle-equivalence" } else { s };
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub max_n: u32,
    pub checks: u64,
    pub counterexample: Option<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn summary_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("{status} {} (max_n {}, {} checks)", self.suite, self.max_n, self.checks)
    }
}

/// Counts assertions and keeps the first failure.
struct Checker {
    checks: u64,
    failure: Option<String>,
    notes: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { checks: 0, failure: None, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
        ok
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }

    fn fail(&mut self, msg: String) {
        self.check(false, || msg);
    }

    fn finish(self, suite: Suite, max_n: u32) -> SuiteReport {
        SuiteReport { suite, max_n, checks: self.checks, counterexample: self.failure, notes: self.notes }
    }
}

pub fn run_suite(suite: Suite, max_n: u32) -> SuiteReport {
    let mut c = Checker::new();
    match suite {
        Suite::Reduction => reduction(&mut c, max_n),
        Suite::Counts => counts(&mut c, max_n),
        Suite::Mod9 => mod9(&mut c, max_n),
        Suite::Palindrome => palindrome(&mut c, max_n),
        Suite::OracleEquivalence => oracle_equivalence(&mut c, max_n),
        Suite::Completeness => completeness(&mut c, max_n),
        Suite::Steeples => steeples(&mut c, max_n),
    }
    c.finish(suite, max_n)
}

/// Fraction-derived unit rows `C_0..=C_max`, computed once.
struct Rows(Vec<CrossDiffRow>);

impl Rows {
    fn build(c: &mut Checker, max_n: u32) -> Option<Rows> {
        if max_n > MATERIALIZE_CAP {
            c.fail(format!("row bound {max_n} is past the materialization cap {MATERIALIZE_CAP}"));
            return None;
        }
        let rows = (0..=max_n).map(|n| crossdiffs_from_fractions(&RowSpec::unit(n))).collect::<Result<Vec<_>, _>>();
        match rows {
            Ok(rows) => Some(Rows(rows)),
            Err(e) => {
                c.fail(e.to_string());
                None
            }
        }
    }

    fn get(&self, n: u32) -> &CrossDiffRow {
        &self.0[n as usize]
    }
}

fn reduction(c: &mut Checker, max_n: u32) {
    let census = match reduction_census(max_n) {
        Ok(census) => census,
        Err(e) => return c.fail(e.to_string()),
    };
    let factors: Vec<String> = census.factors.iter().map(|(f, count)| format!("{f}: {count}")).collect();
    c.notes.push(format!("{} constructions, factors {{{}}}", census.constructions, factors.join(", ")));
    c.notes.push(format!(
        "{} reducing; unit-step numerators {}, unit-step denominators {}",
        census.reducing, census.unit_step_numerators, census.unit_step_denominators
    ));
    c.check(census.only_one_and_three(), || format!("reduction factor outside {{1, 3}}: {factors:?}"));
    c.check(census.asymmetric == 0, || {
        format!("left/right factors differ: {}", census.first_bad.clone().unwrap_or_default())
    });
    c.check(census.non_dividing == 0, || "a reduction factor does not divide the parents' cross-difference".into());
    c.check(census.monotone_numerators == census.reducing, || "reduced numerators are not monotone".into());
    c.check(census.monotone_denominators == census.reducing, || "reduced denominators are not monotone".into());

    let Ok(all) = expansions(&RowSpec::unit(max_n)) else { return };
    for e in all {
        let (l, r) = (&e.gap.left, &e.gap.right);
        let (x, z) = (&e.mediants[0].fraction, &e.mediants[1].fraction);
        let between = l.value_cmp(x).is_lt() && x.value_cmp(z).is_lt() && z.value_cmp(r).is_lt();
        if !c.check(between, || format!("mediants {x}, {z} not strictly inside {l}, {r}")) {
            return;
        }
        if !e.mediants[0].factor.is_one() {
            // Reduced quadruples step by (c - a) / 3 on both sides.
            let step_ok = |a: &BigUint, x: &BigUint, z: &BigUint, c: &BigUint| {
                let (lo, hi) = if a < c { (a, c) } else { (c, a) };
                let step = (hi - lo) / 3u32;
                let d = |p: &BigUint, q: &BigUint| if p < q { q - p } else { p - q };
                d(a, x) == step && d(x, z) == step && d(z, c) == step
            };
            let ok = step_ok(l.num(), x.num(), z.num(), r.num()) && step_ok(l.den(), x.den(), z.den(), r.den());
            if !c.check(ok, || format!("reduced mediants of {l}, {r} do not step evenly")) {
                return;
            }
        }
    }
}

fn counts(c: &mut Checker, max_n: u32) {
    let Some(rows) = Rows::build(c, max_n) else { return };
    for n in 0..=max_n {
        let row = rows.get(n);
        match observed_counts(row) {
            Ok(observed) => {
                if !c
                    .check(observed == predicted_counts(n), || format!("C_{n}: observed counts differ from prediction"))
                {
                    return;
                }
            }
            Err(e) => return c.fail(format!("C_{n}: {e}")),
        }
        if n >= 1 {
            let ones = row.values().iter().filter(|v| v.is_one()).count();
            let share = num_rational::BigRational::new(ones.into(), pow3(n).into());
            c.check(share == ones_fraction(n), || format!("C_{n}: ones share {share} != formula"));
        }
        // Peaks above 3 sit at 3i + 1 under a peak one level lower.
        if n >= 1 {
            let prev = rows.get(n - 1);
            for (i, v) in row.values().iter().enumerate() {
                if *v > BigUint::from(3u32) && is_strict_local_max(row, i).unwrap() {
                    let parent = i / 3;
                    let ok =
                        i % 3 == 1 && &prev.values()[parent] * 3u32 == *v && is_strict_local_max(prev, parent).unwrap();
                    if !c.check(ok, || format!("C_{n}({i}) = {v} is a peak without a peak parent")) {
                        return;
                    }
                }
            }
        }
        // No ternary 1 digit implies value 1; the converse fails from row 3.
        let mut extra_ones = 0u64;
        for (i, v) in row.values().iter().enumerate() {
            let t = TernaryIndex::new(BigUint::from(i), n as usize).unwrap();
            if t.ones_count() == 0 {
                if !c.check(v.is_one(), || format!("C_{n}({i}) has no ternary 1 but value {v}")) {
                    return;
                }
            } else if v.is_one() {
                extra_ones += 1;
            }
        }
        c.check((extra_ones > 0) == (n >= 3), || format!("C_{n}: ones beyond the Cantor indices: {extra_ones}"));
    }
    for check in oeis_report() {
        c.check(check.matches(), || format!("OEIS {} prefix mismatch", check.id));
    }
    for n in 0..=max_n {
        let ok = a_seq(n) + b_seq(n) * 2u32 == predicted_counts(n).get(0).unwrap().total.clone() * 2u32;
        c.check(ok, || format!("ones total for row {n} disagrees with b(n) + a(n)/2"));
    }
}

fn mod9(c: &mut Checker, max_n: u32) {
    let census = match mod9_census(max_n) {
        Ok(census) => census,
        Err(e) => return c.fail(e.to_string()),
    };
    c.notes.push(census.to_text().trim_end().to_string());
    c.check(census.violations() == 0, || {
        let (n, i, a, b) = census.first_violation.clone().unwrap();
        format!("row {n} gap {i}: {a}, {b} has cd ≡ 0 (mod 9) but is neither same nor complementary")
    });
    c.check(census.first_prediction_failure.is_none(), || {
        let (n, i, a, b) = census.first_prediction_failure.clone().unwrap();
        format!("row {n} gap {i}: {a}, {b} mediant reduction contradicts the mod-9 prediction")
    });
    c.check(census.max_followers() <= 17, || format!("{} followers for one residue", census.max_followers()));
    if max_n >= 8 {
        c.check(census.max_followers() == 17, || format!("max followers {} != 17", census.max_followers()));
    }
}

fn palindrome(c: &mut Checker, max_n: u32) {
    let bound = max_n.max(8);
    let Some(rows) = Rows::build(c, bound) else { return };
    for n in 0..=max_n {
        let row = rows.get(n);
        c.check(row.is_palindrome(), || format!("C_{n} is not a palindrome"));
        c.check(row.values().iter().all(|v| v.is_odd()), || format!("C_{n} has an even value"));
        c.check(row.values().first().is_some_and(One::is_one), || format!("C_{n} does not start with 1"));
        if n >= 1 {
            let prev = rows.get(n - 1).values();
            let third = prev.len();
            let vals = row.values();
            c.check(&vals[..third] == prev, || format!("first third of C_{n} is not C_{}", n - 1));
            c.check(&vals[vals.len() - third..] == prev, || format!("last third of C_{n} is not C_{}", n - 1));
        }
    }
    // A 1 at C_n(i) seeds a copy of C_m at 3^m i.
    for n in 0..=max_n.min(5) {
        for m in 0..=3 {
            let (row, big, small) = (rows.get(n), rows.get(n + m), rows.get(m));
            let span = small.len();
            for (i, v) in row.values().iter().enumerate() {
                if v.is_one() {
                    let ok = big.values()[span * i..span * (i + 1)] == *small.values();
                    if !c.check(ok, || format!("C_{}[{}..] is not a copy of C_{m}", n + m, span * i)) {
                        return;
                    }
                }
            }
        }
    }
}

fn oracle_equivalence(c: &mut Checker, max_n: u32) {
    let Some(rows) = Rows::build(c, max_n) else { return };
    let mut by_rule = CrossDiffRow::seed();
    for n in 0..=max_n {
        if n > 0 {
            by_rule = match propagate_unit(&by_rule) {
                Ok(next) => next,
                Err(e) => return c.fail(format!("rule step to C_{n}: {e}")),
            };
        }
        let from_fractions = rows.get(n);
        if !c.check(&by_rule == from_fractions, || format!("C_{n}: rule route differs from fraction route")) {
            return;
        }
        let mut by_ones: HashMap<Vec<bool>, u32> = HashMap::new();
        for (i, v) in from_fractions.values().iter().enumerate() {
            let idx = BigUint::from(i);
            let oracle = unit_value(&idx, n).expect("index in range");
            if !c.check(oracle == *v, || format!("C_{n}({i}): oracle {oracle} != {v}")) {
                return;
            }
            let t = TernaryIndex::new(idx, n as usize).unwrap();
            let e = unit_exponent_of_digits(t.digits());
            let mask: Vec<bool> = t.digits().iter().map(|&d| d == 1).collect();
            let seen = *by_ones.entry(mask).or_insert(e);
            if !c.check(seen == e, || format!("C_{n}({i}): indices with the same ones disagree")) {
                return;
            }
            for wider in n + 1..=n + 2 {
                let ok = unit_value(&BigUint::from(i), wider).expect("fits") == oracle;
                c.check(ok, || format!("index {i}: value changes between rows {n} and {wider}"));
            }
        }
    }
    // No-reduction closed form and its Cantor zero set.
    for n in 0..=max_n {
        let row = no_reduction_row(n).expect("under cap");
        let bitmap = cantor_bitmap(n);
        let mut zero_level = 0u64;
        for (i, v) in row.values().iter().enumerate() {
            let idx = BigUint::from(i);
            if !c.check(*v == no_reduction_value(&idx), || format!("no-reduction C_{n}({i}) = {v} != 3^n(i)")) {
                return;
            }
            c.check(v.is_one() == bitmap.bits[i], || format!("no-reduction zero level differs from Cantor at {i}"));
            zero_level += u64::from(v.is_one());
        }
        c.check(zero_level == 1u64 << n, || format!("row {n}: {zero_level} zero-level intervals, want 2^{n}"));
    }
}

fn completeness(c: &mut Checker, max_n: u32) {
    for n in 0..=max_n.min(10) {
        let row: Vec<Fraction> = match generate_row(&RowSpec::unit(n)) {
            Ok(stream) => stream.collect(),
            Err(e) => return c.fail(e.to_string()),
        };
        for (i, f) in row.iter().enumerate() {
            c.check(f.den().is_odd(), || format!("SB_{n}[{i}] = {f} has an even denominator"));
            c.check(f.is_reduced(), || format!("SB_{n}[{i}] = {f} is not reduced"));
        }
        for (i, w) in row.windows(2).enumerate() {
            c.check(w[0].value_cmp(&w[1]).is_lt(), || format!("SB_{n} not increasing at {i}"));
            c.check(w[0].num().is_odd() != w[1].num().is_odd(), || format!("SB_{n} numerator parity repeats at {i}"));
        }
        if n >= 1 {
            let prev: Vec<Fraction> = generate_row(&RowSpec::unit(n - 1)).unwrap().collect();
            let ok = prev.iter().enumerate().all(|(i, f)| row[3 * i] == *f);
            c.check(ok, || format!("SB_{} is not SB_{n} at indices 3i", n - 1));
        }
        if c.failed() {
            return;
        }
    }
    let mut found = 0u64;
    for q in (3..=15u64).step_by(2) {
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let target = Fraction::from_u64(p, q);
            let hit = find_fraction(&target, max_n);
            found += u64::from(hit.is_some());
            if !c.check(hit.is_some(), || format!("{target} not found in rows <= {max_n}")) {
                return;
            }
        }
    }
    c.notes.push(format!("{found} odd-denominator fractions located"));
    for even in [2u64, 4, 6, 8, 10] {
        let target = Fraction::from_u64(1, even);
        c.check(find_fraction(&target, max_n).is_none(), || format!("{target} should never appear"));
    }
}

fn steeples(c: &mut Checker, max_n: u32) {
    let Some(rows) = Rows::build(c, max_n) else { return };
    let mut previous = None;
    for n in 1..=max_n {
        let row = rows.get(n);
        let steeple = match extract_steeple(row) {
            Ok(s) => s,
            Err(e) => return c.fail(e.to_string()),
        };
        c.check(steeple.start > 0 && row.values()[steeple.start - 1].is_one(), || format!("C_{n} steeple not flanked"));
        c.check(steeple.end + 1 < row.len() && row.values()[steeple.end + 1].is_one(), || {
            format!("C_{n} steeple not flanked on the right")
        });
        // Steeple members are exactly the middle index and middleness > ceil(n/2).
        let half = (n as usize).div_ceil(2);
        for i in 0..row.len() {
            let t = TernaryIndex::new(BigUint::from(i), n as usize).unwrap();
            let inside = steeple.start <= i && i <= steeple.end;
            let expected_inside = t.middleness().is_none_or(|m| m > half);
            if !c.check(inside == expected_inside, || format!("C_{n}({i}): steeple membership")) {
                return;
            }
            if inside {
                let e = t.middleness().map_or(n, |m| 2 * m as u32 - n - 1);
                c.check(row.values()[i] == pow3(e), || format!("C_{n}({i}) != 3^{e} on the steeple"));
            }
        }
        if let Some(prev) = previous.replace(steeple.values.clone()) {
            let tripled: Vec<BigUint> = prev.iter().map(|v| v * 3u32).collect();
            if n % 2 == 1 {
                c.check(steeple.values == tripled, || format!("odd steeple {n} is not the previous one times 3"));
            } else {
                let third = tripled.len();
                let ok = steeple.values.len() == 3 * third
                    && steeple.values[third..2 * third] == tripled[..]
                    && steeple.values[..third]
                        .iter()
                        .chain(&steeple.values[2 * third..])
                        .all(|v| *v == BigUint::from(3u32));
                c.check(ok, || format!("even steeple {n} does not wrap the previous one in threes"));
            }
        }
        // Row 2k + 1: middleness k + 1 gives 1 (the threes of the previous
        // even steeple divided by 3).
        if n % 2 == 1 {
            let k = (n as usize - 1) / 2;
            for i in 0..row.len() {
                let t = TernaryIndex::new(BigUint::from(i), n as usize).unwrap();
                if t.middleness() == Some(k + 1) && !c.check(row.values()[i].is_one(), || format!("C_{n}({i}) != 1")) {
                    return;
                }
            }
            if let Some((i, v)) = odd_row_literal_counterexample(row) {
                if !c.notes.iter().any(|note| note.starts_with("literal")) {
                    c.notes.push(format!("literal n = 2k - 1 reading refuted: C_{n}({i}) = {v}"));
                }
            }
        }
        // Each middleness-m block is 3^{m-1} back-to-back copies of C_{n+1-2m}.
        for m in 1..=half {
            let copy = rows.get(n + 1 - 2 * m as u32).values();
            let block_len = pow3(n - m as u32);
            let block_len = usize::try_from(block_len).expect("small row");
            let ones_prefix: usize = (0..m - 1).map(|p| 3usize.pow(n - 1 - p as u32)).sum();
            for lead in [0usize, 2] {
                let start = ones_prefix + lead * 3usize.pow(n - m as u32);
                let block = &row.values()[start..start + block_len];
                let ok = block.len() == 3usize.pow(m as u32 - 1) * copy.len()
                    && block.chunks(copy.len()).all(|chunk| chunk == copy);
                if !c.check(ok, || {
                    format!("C_{n}: middleness-{m} block at {start} is not copies of C_{}", n + 1 - 2 * m as u32)
                }) {
                    return;
                }
            }
        }
    }
}

/// First index of an odd row `n = 2k - 1` with middleness `k + 1` whose
/// value is not 1, if any.
pub fn odd_row_literal_counterexample(row: &CrossDiffRow) -> Option<(usize, BigUint)> {
    let n = row.n() as usize;
    if n.is_multiple_of(2) {
        return None;
    }
    let k = n.div_ceil(2);
    (0..row.len()).find_map(|i| {
        let t = TernaryIndex::new(BigUint::from(i), n).unwrap();
        let v = &row.values()[i];
        (t.middleness() == Some(k + 1) && !v.is_one()).then(|| (i, v.clone()))
    })
}
