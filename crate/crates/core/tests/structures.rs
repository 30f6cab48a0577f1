use std::collections::BTreeSet;

use proptest::prelude::*;

use tterel::generators::Generator;
use tterel::structure::{BuiltinStructure, Structure};
use tterel::tte::{AgingFunction, Lifetime, TteModel};
use tterel::Error;

/// Random minimal path sets over `n` components with every component used.
fn path_sets(n: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::btree_set(1..=n, 1..=n), 1..6).prop_map(move |sets| {
        let mut minimal: Vec<BTreeSet<usize>> = Vec::new();
        for s in &sets {
            if !sets.iter().any(|o| o != s && o.is_subset(s)) && !minimal.contains(s) {
                minimal.push(s.clone());
            }
        }
        let used: BTreeSet<usize> = minimal.iter().flatten().copied().collect();
        let missing: BTreeSet<usize> = (1..=n).filter(|i| !used.contains(i)).collect();
        if !missing.is_empty() {
            minimal.push(missing);
        }
        minimal
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect()
    })
}

/// Reliability under independence by enumerating all 2^n component states.
fn brute_force(paths: &[Vec<usize>], p: &[f64]) -> f64 {
    let n = p.len();
    (0u32..1 << n)
        .map(|mask| {
            let works = |i: usize| mask >> (i - 1) & 1 == 1;
            let up = paths.iter().any(|s| s.iter().all(|&i| works(i)));
            if !up {
                return 0.0;
            }
            (1..=n)
                .map(|i| if works(i) { p[i - 1] } else { 1.0 - p[i - 1] })
                .product()
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn survival_matches_state_enumeration(
        (n, paths) in (1usize..=5).prop_flat_map(|n| (Just(n), path_sets(n))),
        rates in prop::collection::vec(0.2f64..3.0, 5),
        t in 0.05f64..2.0,
    ) {
        let s = Structure::new(n, &paths).unwrap();
        let aging: Vec<AgingFunction> = rates[..n]
            .iter()
            .map(|&c| AgingFunction::linear(c).unwrap())
            .collect();
        let m = TteModel::new(Generator::independence(), aging, s).unwrap();
        let p: Vec<f64> = rates[..n].iter().map(|c| (-c * t).exp()).collect();
        let expected = brute_force(&paths, &p);
        let got = m.system().unwrap().survival(t);
        prop_assert!((got - expected).abs() <= 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn cardinality_coefficients_sum_to_one(
        (n, paths) in (1usize..=6).prop_flat_map(|n| (Just(n), path_sets(n))),
    ) {
        let s = Structure::new(n, &paths).unwrap();
        let c = s.cardinality_coefficients().unwrap();
        prop_assert_eq!(c.values().sum::<i64>(), 1);
        let terms = s.signed_union_terms().unwrap();
        prop_assert_eq!(terms.iter().map(|t| t.coefficient).sum::<i64>(), 1);
    }

    #[test]
    fn normalization_is_idempotent(
        (n, paths) in (1usize..=6).prop_flat_map(|n| (Just(n), path_sets(n))),
    ) {
        let s = Structure::new(n, &paths).unwrap();
        let again = Structure::new(n, &s.path_sets_one_based()).unwrap();
        prop_assert_eq!(s, again);
    }

    #[test]
    fn lifetime_is_max_of_path_minima(
        (n, paths) in (1usize..=5).prop_flat_map(|n| (Just(n), path_sets(n))),
        x in prop::collection::vec(0.0f64..10.0, 5),
    ) {
        let s = Structure::new(n, &paths).unwrap();
        let expected = paths
            .iter()
            .map(|p| p.iter().map(|&i| x[i - 1]).fold(f64::INFINITY, f64::min))
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(s.lifetime(&x[..n]), expected);
    }
}

#[test]
fn k_of_n_matches_enumerated_subsets() {
    for n in 1..=6 {
        for k in 1..=n {
            let built = Structure::builtin(BuiltinStructure::KOutOfN(k), n).unwrap();
            let subsets: Vec<Vec<usize>> = (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (1..=n).filter(|i| m >> (i - 1) & 1 == 1).collect())
                .collect();
            assert_eq!(built, Structure::new(n, &subsets).unwrap(), "{k}-of-{n}");
        }
    }
}

#[test]
fn two_of_three_coefficients() {
    let s = Structure::builtin(BuiltinStructure::KOutOfN(2), 3).unwrap();
    let c = s.cardinality_coefficients().unwrap();
    assert_eq!(c.get(&2), Some(&3));
    assert_eq!(c.get(&3), Some(&-2));
    let a = Structure::builtin(BuiltinStructure::Aircraft4, 4).unwrap();
    let c = a.cardinality_coefficients().unwrap();
    assert_eq!((c[&2], c[&3], c[&4]), (4, -4, 1));
}

#[test]
fn rejects_malformed_structures() {
    assert!(matches!(Structure::new(3, &[]), Err(Error::EmptyPathSets)));
    assert!(matches!(
        Structure::new(3, &[vec![1, 4]]),
        Err(Error::IndexOutOfRange { index: 4, n: 3 })
    ));
    assert!(matches!(
        Structure::new(3, &[vec![1, 2]]),
        Err(Error::IrrelevantComponent(3))
    ));
    assert!(matches!(
        Structure::builtin(BuiltinStructure::KOutOfN(4), 3),
        Err(Error::InvalidK { k: 4, n: 3 })
    ));
    assert!(matches!(
        Structure::builtin(BuiltinStructure::Series, 65),
        Err(Error::TooManyComponents(65))
    ));
    assert!(matches!(
        Structure::builtin_named("bridge", 5, None),
        Err(Error::UnknownStructure(_))
    ));
}
