use proptest::prelude::*;

use tterel::generators::Generator;
use tterel::mc_oracle::{empirical_residual, sample};
use tterel::residual::{
    compare_residuals, residual_component, residual_series, residual_survival, ResidualKind,
    ResidualPrediction, ResidualSpec,
};
use tterel::structure::{BuiltinStructure, Structure};
use tterel::tte::{AgingFunction, Lifetime, Target, TteModel};
use tterel::Error;

fn structure(i: usize) -> Structure {
    match i {
        0 => Structure::builtin(BuiltinStructure::Series, 3).unwrap(),
        1 => Structure::builtin(BuiltinStructure::Parallel, 3).unwrap(),
        2 => Structure::builtin(BuiltinStructure::KOutOfN(2), 3).unwrap(),
        _ => Structure::builtin(BuiltinStructure::Aircraft4, 4).unwrap(),
    }
}

fn generator(i: usize, p: f64) -> Generator {
    match i {
        0 => Generator::independence(),
        1 => Generator::clayton(0.5 + p, 0.5 + 2.0 * p).unwrap(),
        _ => Generator::gumbel_hougaard(1.0 + 2.0 * p).unwrap(),
    }
}

fn agings(n: usize, p: f64) -> Vec<AgingFunction> {
    (0..n)
        .map(|k| match k % 3 {
            0 => AgingFunction::linear(0.5 + p).unwrap(),
            1 => AgingFunction::exp_minus_one(0.5, 1.0 + p).unwrap(),
            _ => AgingFunction::power(1.0, 0.7 + p).unwrap(),
        })
        .collect()
}

fn model(si: usize, gi: usize, p: f64) -> TteModel {
    let s = structure(si);
    TteModel::new(generator(gi, p), agings(s.n(), p), s).unwrap()
}

fn residual(m: &TteModel, target: Target, t: f64, kind: ResidualKind) -> impl Lifetime {
    residual_survival(&ResidualSpec::new(m.clone(), target, t, kind)).unwrap()
}

/// Structure reliability under independence by state enumeration.
fn reliability(s: &Structure, p: &[f64]) -> f64 {
    let paths = s.path_sets_one_based();
    let n = p.len();
    (0u32..1 << n)
        .filter(|mask| {
            paths
                .iter()
                .any(|q| q.iter().all(|&i| mask >> (i - 1) & 1 == 1))
        })
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { p[i] } else { 1.0 - p[i] })
                .product::<f64>()
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn usual_residual_is_survival_ratio(
        si in 0usize..4, gi in 0usize..3, p in 0.0f64..1.0,
        t in 0.0f64..1.5, x in 0.0f64..3.0,
    ) {
        let m = model(si, gi, p);
        let sys = m.system().unwrap();
        prop_assume!(sys.survival(t) > 1e-6);
        let r = residual(&m, Target::System, t, ResidualKind::Usual);
        let expected = sys.survival(t + x) / sys.survival(t);
        prop_assert!((r.survival(x) - expected).abs() <= 1e-10);
    }

    #[test]
    fn residual_at_zero_time_is_the_lifetime(
        si in 0usize..4, gi in 0usize..3, p in 0.0f64..1.0, x in 0.0f64..3.0,
    ) {
        let m = model(si, gi, p);
        let sys = m.system().unwrap();
        for kind in [ResidualKind::Usual, ResidualKind::SystemLevel] {
            let r = residual(&m, Target::System, 0.0, kind);
            prop_assert!((r.survival(x) - sys.survival(x)).abs() <= 1e-12);
        }
    }

    #[test]
    fn system_level_residual_under_independence(
        si in 0usize..4, p in 0.0f64..1.0, t in 0.0f64..1.0, x in 0.0f64..2.0,
    ) {
        let m = model(si, 0, p);
        let r = residual(&m, Target::System, t, ResidualKind::SystemLevel);
        let q: Vec<f64> = m
            .aging()
            .iter()
            .map(|a| (a.value(t) - a.value(t + x)).exp())
            .collect();
        let expected = reliability(m.structure(), &q);
        prop_assert!((r.survival(x) - expected).abs() <= 1e-12, "{} vs {expected}", r.survival(x));
    }

    #[test]
    fn residual_survival_is_a_survival_function(
        si in 0usize..4, gi in 0usize..3, p in 0.0f64..1.0,
        t in 0.0f64..1.0, x in 0.0f64..3.0, dx in 0.0f64..1.0,
    ) {
        let m = model(si, gi, p);
        for kind in [ResidualKind::Usual, ResidualKind::SystemLevel] {
            let r = residual(&m, Target::System, t, kind);
            let (a, b) = (r.survival(x), r.survival(x + dx));
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!(b <= a + 1e-14);
        }
    }

    #[test]
    fn series_closed_form_matches_union_terms(
        gi in 0usize..3, p in 0.0f64..1.0, t in 0.0f64..1.0, x in 0.0f64..3.0,
        set in prop::sample::subsequence(vec![1usize, 2, 3, 4], 1..=4),
    ) {
        let m = model(3, gi, p);
        for kind in [ResidualKind::Usual, ResidualKind::SystemLevel] {
            let closed = residual_series(&m, &set, t, kind).unwrap();
            let general = residual(&m, Target::Series(set.clone()), t, kind);
            prop_assert!((closed.survival(x) - general.survival(x)).abs() <= 1e-12);
            let (a, b) = (closed.density(x), general.density(x));
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
        }
    }
}

#[test]
fn clayton_usual_residual_lies_below() {
    let m = TteModel::new(
        Generator::clayton(1.0, 1.0).unwrap(),
        agings(3, 0.4),
        structure(0),
    )
    .unwrap();
    let c = compare_residuals(&m, &Target::Series(vec![1, 2]), 0.5, None).unwrap();
    assert_eq!(c.prediction, ResidualPrediction::UsualBelow);
    assert!(c.usual_below_st() && c.agreement);
    assert!(!c.usual_above_st());
}

#[test]
fn independence_residuals_coincide() {
    let m = model(0, 0, 0.3);
    let c = compare_residuals(&m, &Target::Component(2), 0.7, None).unwrap();
    assert_eq!(c.prediction, ResidualPrediction::Equal);
    assert!(c.usual_below_st() && c.usual_above_st() && c.agreement);
    let a = residual_component(&m, 2, 0.7, ResidualKind::Usual).unwrap();
    let b = residual_component(&m, 2, 0.7, ResidualKind::SystemLevel).unwrap();
    for x in [0.1, 0.5, 2.0] {
        assert!((a.survival(x) - b.survival(x)).abs() < 1e-14);
    }
}

#[test]
fn parallel_targets_have_no_prediction() {
    let m = model(1, 1, 0.5);
    let c = compare_residuals(&m, &Target::System, 0.4, None).unwrap();
    assert_eq!(c.prediction, ResidualPrediction::None);
    assert!(c.condition.is_none() && c.agreement);
}

#[test]
fn residuals_agree_with_frailty_samples() {
    let m = TteModel::new(
        Generator::clayton(1.5, 2.0).unwrap(),
        agings(4, 0.2),
        structure(3),
    )
    .unwrap();
    let batch = sample(&m, 200_000, 31).unwrap();
    let t = 0.3;
    for kind in [ResidualKind::Usual, ResidualKind::SystemLevel] {
        let r = residual(&m, Target::System, t, kind);
        for x in [0.1, 0.4, 1.0] {
            let e = empirical_residual(&batch, m.structure(), t, x, kind).unwrap();
            let z = e.z_score(r.survival(x));
            assert!(z.abs() < 4.0, "{kind} x={x}: z={z}");
        }
    }
}

#[test]
fn invalid_times_are_rejected() {
    let m = model(0, 2, 0.5);
    let e = residual_series(&m, &[1], -1.0, ResidualKind::Usual).unwrap_err();
    assert!(matches!(e, Error::NegativeTime(_)));
    let e = residual_survival(&ResidualSpec::new(
        m.clone(),
        Target::System,
        200.0,
        ResidualKind::Usual,
    ))
    .unwrap_err();
    assert!(matches!(e, Error::SurvivalUnderflowAt(_)));
    let e = residual_series(&m, &[5], 0.1, ResidualKind::Usual).unwrap_err();
    assert_eq!(e.kind(), "IndexOutOfRange");
}
