use cnzn::rational::binom;
use cnzn::stirling::{stirling_first, stirling_second, stirling_second_euler, StirlingTable};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

#[test]
fn triangular_inverse() {
    let t = StirlingTable::new(14);
    for m in 0..=14 {
        for k in 0..=14 {
            let sum: BigInt = (0..=14).map(|j| t.s(m, j) * t.big_s(j, k)).sum();
            let want = if m == k { BigInt::one() } else { BigInt::zero() };
            assert_eq!(sum, want, "m={m} k={k}");
        }
    }
}

proptest! {
    #[test]
    fn near_diagonal_closed_forms(m in 4usize..30) {
        let mi = m as i64;
        prop_assert_eq!(stirling_first(m, m - 1), -binom(mi, 2));
        prop_assert_eq!(stirling_first(m, m - 2) * BigInt::from(4), BigInt::from(3 * mi - 1) * binom(mi, 3));
        prop_assert_eq!(stirling_first(m, m - 3), -binom(mi, 2) * binom(mi, 4));
    }

    #[test]
    fn recursion_matches_euler(m in 0usize..25, k in 0usize..25) {
        prop_assert_eq!(stirling_second(m, k), stirling_second_euler(m, k));
    }
}
