use proptest::prelude::*;

use torsion_scope_core::cmformulas::is_fundamental;
use torsion_scope_core::{
    cm_class_number, cm_min_degree, kronecker, reduced_forms_count, splitting_type, CMOrder,
    Splitting,
};

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn fundamentals(bound: i64) -> Vec<i64> {
    (3..=bound)
        .map(|d| -d)
        .filter(|&d| is_fundamental(d))
        .collect()
}

/// Every negative discriminant down to `-10^4` is `f^2 * delta_K` for exactly
/// one fundamental `delta_K`, and the formula agrees with counting forms.
#[test]
fn class_number_formula_matches_forms() {
    let mut covered = 0;
    for dk in fundamentals(10_000) {
        let h_k = reduced_forms_count(dk).unwrap();
        let mut f = 1i64;
        while f * f * dk.abs() <= 10_000 {
            let o = CMOrder::with_class_number(dk, f as u64, h_k).unwrap();
            assert_eq!(
                cm_class_number(&o).unwrap(),
                reduced_forms_count(f * f * dk).unwrap(),
                "delta_K = {dk}, f = {f}"
            );
            covered += 1;
            f += 1;
        }
    }
    let all = (3..=10_000i64)
        .filter(|d| matches!((-d).rem_euclid(4), 0 | 1))
        .count();
    assert_eq!(covered, all);
}

#[test]
fn ramified_iff_divides() {
    for dk in fundamentals(2_000) {
        for p in PRIMES {
            let s = splitting_type(dk, p).unwrap();
            assert_eq!(s == Splitting::Ramified, dk % p as i64 == 0, "({dk}/{p})");
            assert_eq!(kronecker(dk, p) == 1, s == Splitting::Split);
        }
    }
}

fn fundamental() -> impl Strategy<Value = i64> {
    (3i64..3000).prop_filter_map("fundamental", |d| is_fundamental(-d).then_some(-d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn least_degree_nondecreasing_in_n(dk in fundamental(), p in prop::sample::select(PRIMES.to_vec())) {
        let mut prev = 0;
        for n in 1..=8 {
            let r = cm_min_degree(dk, None, p, n).unwrap();
            prop_assert!(r.delta >= prev, "n = {}", n);
            prev = r.delta;
        }
    }

    #[test]
    fn split_identity(dk in fundamental(), p in prop::sample::select(PRIMES.to_vec()), n in 1u32..8) {
        prop_assume!(splitting_type(dk, p).unwrap() == Splitting::Split);
        let h = reduced_forms_count(dk).unwrap();
        let r = cm_min_degree(dk, None, p, n).unwrap();
        let w = CMOrder::new(dk, 1).unwrap().w_k();
        prop_assert_eq!(r.conductor, 1);
        prop_assert_eq!(r.delta * w, 2 * h * p.pow(n - 1) * (p - 1));
    }

    #[test]
    fn witness_class_number_grows(dk in fundamental(), p in prop::sample::select(PRIMES[..4].to_vec())) {
        let s = splitting_type(dk, p).unwrap();
        prop_assume!(s != Splitting::Split);
        let mut prev = 0;
        for n in 1..=12 {
            let r = cm_min_degree(dk, None, p, n).unwrap();
            prop_assert_eq!(r.conductor, p.pow(n / 2));
            let h = cm_class_number(&CMOrder::new(dk, r.conductor).unwrap()).unwrap();
            prop_assert!(h >= prev);
            prev = h;
        }
        // f = p^6 at n = 12: h(O) >= h_K p^5 (p - 1) / 3.
        let first = cm_class_number(&CMOrder::new(dk, 1).unwrap()).unwrap();
        prop_assert!(3 * prev >= first * p.pow(5) * (p - 1));
    }
}

#[test]
fn huge_parameters_report_overflow() {
    use torsion_scope_core::Error;
    assert!(matches!(
        cm_min_degree(-3, None, 13, 40),
        Err(Error::Overflow(_))
    ));
}
