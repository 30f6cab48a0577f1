use proptest::prelude::*;

use tterel::generators::Generator;
use tterel::orders::{check_st, Grid};
use tterel::structure::{BuiltinStructure, Structure};
use tterel::tte::{AgingFunction, Lifetime, Target, TteModel};

fn structure(i: usize) -> Structure {
    match i {
        0 => Structure::builtin(BuiltinStructure::Series, 3).unwrap(),
        1 => Structure::builtin(BuiltinStructure::Parallel, 3).unwrap(),
        2 => Structure::builtin(BuiltinStructure::KOutOfN(2), 3).unwrap(),
        3 => Structure::builtin(BuiltinStructure::Aircraft4, 4).unwrap(),
        _ => Structure::new(4, &[vec![1, 2], vec![3, 4], vec![1, 4]]).unwrap(),
    }
}

fn generator(i: usize, p: f64) -> Generator {
    match i {
        0 => Generator::independence(),
        1 => Generator::clayton(0.5 + p, 0.5 + 2.0 * p).unwrap(),
        2 => Generator::gumbel_hougaard(1.0 + 2.0 * p).unwrap(),
        3 => Generator::gumbel_barnett(0.1 + 0.9 * p).unwrap(),
        4 => Generator::amh(-1.0 + 0.99 * p).unwrap(),
        _ => Generator::frank(-0.1 - 5.0 * p).unwrap(),
    }
}

fn aging(i: usize, p: f64) -> AgingFunction {
    match i {
        0 => AgingFunction::linear(0.5 + p).unwrap(),
        1 => AgingFunction::exp_minus_one(0.5 + p, 1.0 + p).unwrap(),
        _ => AgingFunction::power(1.0, 0.5 + 2.0 * p).unwrap(),
    }
}

fn model(si: usize, gi: usize, ai: &[usize], p: f64) -> TteModel {
    let s = structure(si);
    let r = (0..s.n()).map(|k| aging(ai[k % ai.len()], p)).collect();
    TteModel::new(generator(gi, p), r, s).unwrap()
}

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// `P(T > t)` for gamma frailty `Theta ~ Gamma(a, rate b)` by integrating
/// the conditionally independent reliability over the frailty density.
fn gamma_frailty_survival(a: f64, b: f64, paths: &[Vec<usize>], r: &[f64]) -> f64 {
    let n = r.len();
    let reliability = |theta: f64| -> f64 {
        let p: Vec<f64> = r.iter().map(|ri| (-theta * ri).exp()).collect();
        (0u32..1 << n)
            .filter(|mask| {
                paths
                    .iter()
                    .any(|s| s.iter().all(|&i| mask >> (i - 1) & 1 == 1))
            })
            .map(|mask| {
                (0..n)
                    .map(|i| if mask >> i & 1 == 1 { p[i] } else { 1.0 - p[i] })
                    .product::<f64>()
            })
            .sum()
    };
    // u = v^2 smooths the u^(a-1) kernel at the origin.
    let kernel = |v: f64| 2.0 * v.powf(2.0 * a - 1.0) * (-v * v).exp();
    let norm = simpson(kernel, 0.0, 9.0, 40_000);
    simpson(|v| kernel(v) * reliability(v * v / b), 0.0, 9.0, 40_000) / norm
}

#[test]
fn clayton_system_matches_gamma_frailty_quadrature() {
    for (a, b) in [(1.0, 1.0), (2.0, 3.0), (1.5, 0.5)] {
        for si in 0..5 {
            let s = structure(si);
            let paths = s.path_sets_one_based();
            let r: Vec<AgingFunction> = (0..s.n())
                .map(|k| AgingFunction::linear(0.5 + 0.3 * k as f64).unwrap())
                .collect();
            let m = TteModel::new(Generator::clayton(a, b).unwrap(), r.clone(), s).unwrap();
            let sys = m.system().unwrap();
            for t in [0.1, 0.5, 1.0, 3.0] {
                let rv: Vec<f64> = r.iter().map(|x| x.value(t)).collect();
                let expected = gamma_frailty_survival(a, b, &paths, &rv);
                let got = sys.survival(t);
                assert!(
                    (got - expected).abs() < 1e-8,
                    "clayton({a},{b}) structure {si} t={t}: {got} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn series_independence_hazard_is_constant() {
    let m = TteModel::identical(
        Generator::independence(),
        AgingFunction::linear(1.0).unwrap(),
        Structure::builtin(BuiltinStructure::Series, 5).unwrap(),
    );
    let l = m.system().unwrap();
    for t in [0.01, 0.5, 2.0, 10.0, 100.0] {
        assert!((l.hazard(t) - 5.0).abs() < 1e-12);
    }
}

#[test]
fn hazard_is_infinite_past_underflow() {
    let m = TteModel::identical(
        Generator::gumbel_barnett(0.5).unwrap(),
        AgingFunction::exp_minus_one(1.0, 1.0).unwrap(),
        Structure::builtin(BuiltinStructure::Series, 2).unwrap(),
    );
    let l = m.system().unwrap();
    assert!(l.hazard(0.5).is_finite());
    assert_eq!(l.hazard(5.0), f64::INFINITY);
    assert_eq!(l.survival(5.0), 0.0);
}

#[test]
fn joint_survival_reproduces_marginals_and_copula() {
    let g = Generator::clayton(2.0, 3.0).unwrap();
    let m = model(3, 1, &[0, 1, 2], 0.4);
    let m = m.with_generator(g);
    let x = [0.3, 0.7, 1.1, 0.2];
    let u: Vec<f64> = (1..=4)
        .map(|i| {
            let mut y = [0.0; 4];
            y[i - 1] = x[i - 1];
            m.joint_survival(&y).unwrap()
        })
        .collect();
    for (i, &ui) in u.iter().enumerate() {
        assert!((ui - m.marginal(i + 1).unwrap().survival(x[i])).abs() < 1e-14);
    }
    let joint = m.joint_survival(&x).unwrap();
    assert!((joint - g.copula(&u).unwrap()).abs() < 1e-12);
}

#[test]
fn density_integrates_to_cdf() {
    for gi in 0..3 {
        let m = model(4, gi, &[0, 1, 2], 0.3);
        let l = m.system().unwrap();
        for t in [0.2, 1.0, 2.5] {
            // x = t v^4 tames densities that blow up at 0.
            let integrand = |v: f64| {
                if v == 0.0 {
                    0.0
                } else {
                    l.density(t * v.powi(4)) * 4.0 * t * v.powi(3)
                }
            };
            let integral = simpson(integrand, 0.0, 1.0, 4000);
            assert!(
                (integral - l.cdf(t)).abs() < 1e-6,
                "generator {gi} t={t}: {integral} vs {}",
                l.cdf(t)
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn id_collapse_matches_union_terms(
        si in 0usize..5, gi in 0usize..6, ai in 0usize..3,
        p in 0.0f64..1.0, t in 0.01f64..4.0,
    ) {
        let m = model(si, gi, &[ai], p);
        prop_assume!(m.is_proper());
        let (a, b) = (m.system().unwrap(), m.id_lifetime().unwrap());
        prop_assert!((a.survival(t) - b.survival(t)).abs() <= 1e-12);
        let (da, db) = (a.density(t), b.density(t));
        prop_assert!((da - db).abs() <= 1e-10 * da.abs().max(1.0));
    }

    #[test]
    fn density_is_minus_survival_derivative(
        si in 0usize..5, gi in 0usize..6, p in 0.0f64..1.0, t in 0.05f64..3.0,
    ) {
        let m = model(si, gi, &[0, 1, 2], p);
        prop_assume!(m.is_proper());
        let l = m.system().unwrap();
        prop_assume!(l.survival(t) > 1e-6);
        let h = 1e-4 * t;
        let s = |x: f64| l.survival(x);
        let fd = -(s(t - 2.0 * h) - 8.0 * s(t - h) + 8.0 * s(t + h) - s(t + 2.0 * h)) / (12.0 * h);
        let f = l.density(t);
        prop_assert!((f - fd).abs() <= 1e-5 * f.abs().max(1e-3), "{f} vs {fd}");
    }

    #[test]
    fn survival_cdf_and_log_forms_agree(
        si in 0usize..5, gi in 0usize..6, p in 0.0f64..1.0, t in 0.0f64..5.0,
    ) {
        let m = model(si, gi, &[2, 0], p);
        prop_assume!(m.is_proper());
        let l = m.system().unwrap();
        let s = l.survival(t);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((s + l.cdf(t) - 1.0).abs() <= 1e-12);
        if s > 1e-300 {
            prop_assert!((l.log_survival(t) - s.ln()).abs() <= 1e-9 * s.ln().abs().max(1.0));
        }
    }

    #[test]
    fn sandwich_between_series_and_parallel(
        si in 0usize..5, gi in 0usize..6, p in 0.0f64..1.0,
    ) {
        let m = model(si, gi, &[0, 1], p);
        prop_assume!(m.is_proper());
        let sys = m.lifetime(&Target::System).unwrap();
        let all: Vec<usize> = (1..=m.n()).collect();
        let lo = m.series(&all).unwrap();
        let hi = m.parallel(&[]).unwrap();
        let g = Grid::auto_for(&[&hi, &lo], 256).unwrap();
        prop_assert!(check_st(&lo, &sys, &g).unwrap().holds());
        prop_assert!(check_st(&sys, &hi, &g).unwrap().holds());
    }

    #[test]
    fn survival_is_nonincreasing(
        si in 0usize..5, gi in 0usize..6, p in 0.0f64..1.0,
        t in 0.0f64..5.0, dt in 0.0f64..1.0,
    ) {
        let m = model(si, gi, &[1, 2, 0], p);
        prop_assume!(m.is_proper());
        let l = m.system().unwrap();
        prop_assert!(l.survival(t + dt) <= l.survival(t) + 1e-15);
    }
}
