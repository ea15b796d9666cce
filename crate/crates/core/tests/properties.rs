use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;

use wsb_core::crossdiff::{crossdiffs_from_fractions, CrossDiffRow};
use wsb_core::oracle::{unit_exponent_of_digits, unit_value, TernaryIndex};
use wsb_core::{cross_difference, weighted_mediants, Fraction, RowSpec};

fn reduced_pair() -> impl Strategy<Value = (Fraction, Fraction)> {
    (0u64..500, 1u64..500, 0u64..500, 1u64..500)
        .prop_filter("reduced and increasing", |&(a, b, c, d)| a.gcd(&b) == 1 && c.gcd(&d) == 1 && a * d < b * c)
        .prop_map(|(a, b, c, d)| (Fraction::from_u64(a, b), Fraction::from_u64(c, d)))
}

fn unit_rows() -> &'static [CrossDiffRow] {
    use std::sync::OnceLock;
    static ROWS: OnceLock<Vec<CrossDiffRow>> = OnceLock::new();
    ROWS.get_or_init(|| (0..=8).map(|n| crossdiffs_from_fractions(&RowSpec::unit(n)).unwrap()).collect())
}

proptest! {
    #[test]
    fn reduction_factor_divides_crossdiff((l, r) in reduced_pair()) {
        let cd = cross_difference(&l, &r).abs();
        for m in weighted_mediants(3, &l, &r, true) {
            prop_assert!((&cd % BigInt::from(m.factor.clone())) == BigInt::from(0));
        }
    }

    #[test]
    fn mediants_are_strictly_between((l, r) in reduced_pair(), k in 2u32..7, reduce: bool) {
        let ms = weighted_mediants(k, &l, &r, reduce);
        prop_assert_eq!(ms.len() as u32, k - 1);
        let mut prev = l.clone();
        for m in &ms {
            prop_assert!(prev.value_cmp(&m.fraction).is_lt());
            prev = m.fraction.clone();
        }
        prop_assert!(prev.value_cmp(&r).is_lt());
    }

    #[test]
    fn unreduced_mediant_crossdiffs_are_scaled((l, r) in reduced_pair()) {
        let cd = cross_difference(&l, &r);
        let ms = weighted_mediants(3, &l, &r, false);
        let chain = [&l, &ms[0].fraction, &ms[1].fraction, &r];
        let parts: Vec<BigInt> = chain.windows(2).map(|w| cross_difference(w[0], w[1])).collect();
        prop_assert_eq!(parts, vec![cd.clone(), &cd * 3, cd]);
    }

    #[test]
    fn fraction_text_round_trips(num in 0u64..u64::MAX, den in 1u64..u64::MAX) {
        let f = Fraction::from_u64(num, den);
        prop_assert_eq!(f.to_string().parse::<Fraction>().unwrap(), f);
    }

    #[test]
    fn swapping_zero_and_two_digits_keeps_value(digits in prop::collection::vec(0u8..3, 0..40)) {
        let swapped: Vec<u8> = digits.iter().map(|d| 2 - d).collect();
        prop_assert_eq!(unit_exponent_of_digits(&digits), unit_exponent_of_digits(&swapped));
    }

    #[test]
    fn oracle_matches_rows(n in 0u32..=8, seed: u64) {
        let row = &unit_rows()[n as usize];
        let i = (seed % row.len() as u64) as usize;
        prop_assert_eq!(&unit_value(&BigUint::from(i), n).unwrap(), &row.values()[i]);
    }

    #[test]
    fn value_is_independent_of_row_width(value in 0u64..6561, extra in 1usize..6) {
        let t = TernaryIndex::unpadded(BigUint::from(value));
        let w = t.width().max(1);
        let shorter = unit_value(&BigUint::from(value), w as u32).unwrap();
        let longer = unit_value(&BigUint::from(value), (w + extra) as u32).unwrap();
        // Row n is the first third of row n + 1, so the prefix never changes.
        prop_assert_eq!(shorter, longer);
    }

    #[test]
    fn every_value_is_a_power_of_three(n in 0u32..=8, seed: u64) {
        let row = &unit_rows()[n as usize];
        let mut v = row.values()[(seed % row.len() as u64) as usize].clone();
        while (&v % 3u32) == BigUint::from(0u32) {
            v /= 3u32;
        }
        prop_assert!(v.is_one());
    }
}
