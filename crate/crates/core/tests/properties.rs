//! Randomized properties over partitions, probabilities and times.

use iwalk_core::characters::{character, frobenius_transposition_ratio, transposition_character_ratio};
use iwalk_core::exact::{format_rational, parse_rational, rat};
use iwalk_core::partition::{enumerate_partitions, majorization_leq, Majorization};
use iwalk_core::spectrum::{coefficient_sum, eigenvalue_direct, eigenvalue_recursive};
use iwalk_core::walk::{convolution_oracle, distribution_at_time, monte_carlo_estimate};
use iwalk_core::{CycleType, Partition, WalkParams};
use num_traits::{One, Signed};
use proptest::prelude::*;

fn partition_of(n: usize) -> impl Strategy<Value = Partition> {
    let all = enumerate_partitions(n);
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn even_partition(max_n: usize) -> impl Strategy<Value = Partition> {
    (1..=max_n / 2).prop_flat_map(|h| partition_of(2 * h))
}

fn probability() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=12).prop_flat_map(|den| (0..=den, Just(den)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalue_routes_agree(lambda in even_partition(12), (num, den) in probability()) {
        let w = WalkParams::with_ratio(lambda.size(), num, den).unwrap();
        let d = eigenvalue_direct(&lambda, &w).unwrap();
        prop_assert_eq!(eigenvalue_recursive(&lambda, &w).unwrap(), d.clone());
        prop_assert!(d.abs() <= num_rational::BigRational::one());
    }

    #[test]
    fn coefficient_sum_identity(lambda in even_partition(14), (num, den) in probability()) {
        // Errors if the removal-weight sum disagrees with p + (1-p) χ(τ)/d.
        coefficient_sum(&lambda, &rat(num, den)).unwrap();
    }

    #[test]
    fn transposition_ratio_closed_form(lambda in (2usize..=16).prop_flat_map(partition_of)) {
        prop_assert_eq!(transposition_character_ratio(&lambda).unwrap(), frobenius_transposition_ratio(&lambda));
    }

    #[test]
    fn majorization_is_consistent(a in partition_of(9), b in partition_of(9)) {
        let ab = majorization_leq(&a, &b).unwrap();
        let ba = majorization_leq(&b, &a).unwrap();
        match ab {
            Majorization::LessOrEqual => prop_assert!(a == b || ba == Majorization::GreaterOrEqualOnly),
            Majorization::GreaterOrEqualOnly => prop_assert_eq!(ba, Majorization::LessOrEqual),
            Majorization::Incomparable => prop_assert_eq!(ba, Majorization::Incomparable),
        }
    }

    #[test]
    fn characters_respect_conjugation(lambda in (1usize..=9).prop_flat_map(partition_of), seed in 0usize..1000) {
        let n = lambda.size();
        let classes = iwalk_core::partition::enumerate_cycle_types(n);
        let alpha: &CycleType = &classes[seed % classes.len()];
        let chi = character(&lambda, alpha).unwrap();
        let conj = character(&lambda.conjugate(), alpha).unwrap();
        prop_assert_eq!(conj, if alpha.is_even() { chi } else { -chi });
    }

    #[test]
    fn rationals_roundtrip(num in -10_000i64..10_000, den in 1i64..10_000) {
        let r = rat(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fourier_equals_convolution(h in 1usize..=3, (num, den) in probability(), t in 0usize..=6) {
        let w = WalkParams::with_ratio(2 * h, num, den).unwrap();
        prop_assert_eq!(distribution_at_time(&w, t).unwrap(), convolution_oracle(&w, t).unwrap());
    }

    #[test]
    fn monte_carlo_is_seed_deterministic(seed in any::<u64>(), t in 0usize..4) {
        let w = WalkParams::with_ratio(6, 1, 3).unwrap();
        let a = monte_carlo_estimate(&w, t, 2000, seed).unwrap();
        let b = monte_carlo_estimate(&w, t, 2000, seed).unwrap();
        prop_assert_eq!(a.counts, b.counts);
    }
}
