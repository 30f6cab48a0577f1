//! Residual lifetimes `T_t = (T - t | T > t)` and
//! `T*_t = (T - t | X_{1:n} > t)`.
//!
//! The system-level numerator `P(T > x + t, X_{1:n} > t)` reuses the union
//! terms of the target: each term becomes
//! `W(sum_{k in U} R_k(x + t) + sum_{k not in U} R_k(t))`, where the second
//! sum runs over all `n` components of the model.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::orders::{
    check_orders, evaluate_proposition, ConditionReport, Grid, Order, OrderReport, PropositionId,
    PropositionInput, DEFAULT_CLIP, DEFAULT_POINTS,
};
use crate::structure::{ComponentSet, SignedUnionTerm};
use crate::tte::{ln_of, signed_log_sum, value_of, AgingFunction, Lifetime, Target, TteModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualKind {
    /// Conditioned on the system working at `t`.
    Usual,
    /// Conditioned on every component working at `t`.
    SystemLevel,
}

impl FromStr for ResidualKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "usual" => Ok(ResidualKind::Usual),
            "system_level" | "system-level" => Ok(ResidualKind::SystemLevel),
            _ => Err(Error::Spec(format!(
                "unknown residual kind `{s}` (expected usual or system_level)"
            ))),
        }
    }
}

impl fmt::Display for ResidualKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResidualKind::Usual => "usual",
            ResidualKind::SystemLevel => "system_level",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ResidualSpec {
    pub model: TteModel,
    pub target: Target,
    pub t: f64,
    pub kind: ResidualKind,
}

impl ResidualSpec {
    pub fn new(model: TteModel, target: Target, t: f64, kind: ResidualKind) -> Self {
        ResidualSpec {
            model,
            target,
            t,
            kind,
        }
    }
}

fn validate_t(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

/// Residual lifetime of any target, as a function of `x >= 0`.
#[derive(Clone)]
pub struct ResidualLifetime {
    generator: Generator,
    aging: Arc<[AgingFunction]>,
    terms: Vec<SignedUnionTerm>,
    kind: ResidualKind,
    t: f64,
    base: Vec<f64>,
    ln_denominator: f64,
    label: String,
}

impl fmt::Debug for ResidualLifetime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResidualLifetime")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .field("t", &self.t)
            .finish()
    }
}

impl ResidualLifetime {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn kind(&self) -> ResidualKind {
        self.kind
    }

    /// Argument of `W` for one union term at residual time `x`.
    fn argument(&self, set: ComponentSet, x: f64) -> f64 {
        let shifted: f64 = set.iter().map(|k| self.aging[k].value(x + self.t)).sum();
        match self.kind {
            ResidualKind::Usual => shifted,
            ResidualKind::SystemLevel => {
                let rest: f64 = (0..self.aging.len())
                    .filter(|&k| !set.contains(k))
                    .map(|k| self.base[k])
                    .sum();
                shifted + rest
            }
        }
    }

    fn density_sum(&self, x: f64) -> (f64, f64) {
        let parts: Vec<(i64, f64)> = self
            .terms
            .iter()
            .map(|term| {
                let s = self.argument(term.indices, x);
                let ds: f64 = term
                    .indices
                    .iter()
                    .map(|k| self.aging[k].deriv(x + self.t))
                    .sum();
                (term.coefficient, self.generator.ln_neg_dw(s) + ds.ln())
            })
            .collect();
        let (m, pivot) = signed_log_sum(parts.into_iter());
        (m, pivot - self.ln_denominator)
    }
}

impl Lifetime for ResidualLifetime {
    fn log_survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let parts: Vec<(i64, f64)> = self
            .terms
            .iter()
            .map(|term| {
                (
                    term.coefficient,
                    self.generator.ln_w(self.argument(term.indices, x)),
                )
            })
            .collect();
        (ln_of(signed_log_sum(parts.into_iter())) - self.ln_denominator).min(0.0)
    }

    fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        value_of(self.density_sum(x)).max(0.0)
    }

    fn log_density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        ln_of(self.density_sum(x))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Residual lifetime of `spec.target` at time `spec.t`.
pub fn residual_survival(spec: &ResidualSpec) -> Result<ResidualLifetime> {
    validate_t(spec.t)?;
    let m = &spec.model;
    let lifetime = m.lifetime(&spec.target)?;
    let t = spec.t;
    let ln_denominator = match spec.kind {
        ResidualKind::Usual => lifetime.log_survival(t),
        ResidualKind::SystemLevel => m.generator().ln_w(m.aging_sum(ComponentSet::all(m.n()), t)),
    };
    if !(ln_denominator >= DEFAULT_CLIP.ln()) {
        return Err(Error::SurvivalUnderflowAt(t));
    }
    let star = match spec.kind {
        ResidualKind::Usual => "",
        ResidualKind::SystemLevel => "*",
    };
    Ok(ResidualLifetime {
        generator: m.generator(),
        aging: m.aging().to_vec().into(),
        terms: lifetime.terms().to_vec(),
        kind: spec.kind,
        t,
        base: m.aging().iter().map(|r| r.value(t)).collect(),
        ln_denominator,
        label: format!("{}{star}_t({t})", spec.target),
    })
}

/// Closed-form residual of the series system over `P`:
///
/// ```text
/// usual:        W(sum_P R_j(x+t)) / W(sum_P R_j(t))
/// system level: W(sum_P R_j(x+t) + sum_{j not in P} R_j(t)) / W(sum_j R_j(t))
/// ```
#[derive(Debug, Clone)]
pub struct SeriesResidual {
    generator: Generator,
    aging: Vec<AgingFunction>,
    set: ComponentSet,
    t: f64,
    offset: f64,
    ln_denominator: f64,
    label: String,
}

impl SeriesResidual {
    fn argument(&self, x: f64) -> f64 {
        self.set
            .iter()
            .map(|k| self.aging[k].value(x + self.t))
            .sum::<f64>()
            + self.offset
    }
}

impl Lifetime for SeriesResidual {
    fn log_survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        (self.generator.ln_w(self.argument(x)) - self.ln_denominator).min(0.0)
    }

    fn density(&self, x: f64) -> f64 {
        self.log_density(x).exp()
    }

    fn log_density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        let ds: f64 = self
            .set
            .iter()
            .map(|k| self.aging[k].deriv(x + self.t))
            .sum();
        self.generator.ln_neg_dw(self.argument(x)) + ds.ln() - self.ln_denominator
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Residual of the series system `X_P` (1-based indices) at time `t`.
pub fn residual_series(
    model: &TteModel,
    p: &[usize],
    t: f64,
    kind: ResidualKind,
) -> Result<SeriesResidual> {
    validate_t(t)?;
    let set = ComponentSet::from_one_based(p, model.n())?;
    let g = model.generator();
    let base_p = model.aging_sum(set, t);
    let (offset, ln_denominator) = match kind {
        ResidualKind::Usual => (0.0, g.ln_w(base_p)),
        ResidualKind::SystemLevel => {
            let all = model.aging_sum(ComponentSet::all(model.n()), t);
            (all - base_p, g.ln_w(all))
        }
    };
    if !(ln_denominator >= DEFAULT_CLIP.ln()) {
        return Err(Error::SurvivalUnderflowAt(t));
    }
    let star = if kind == ResidualKind::SystemLevel {
        "*"
    } else {
        ""
    };
    Ok(SeriesResidual {
        generator: g,
        aging: model.aging().to_vec(),
        set,
        t,
        offset,
        ln_denominator,
        label: format!("series{set}{star}_t({t})"),
    })
}

/// Residual of component `i` (1-based) at time `t`.
pub fn residual_component(
    model: &TteModel,
    i: usize,
    t: f64,
    kind: ResidualKind,
) -> Result<SeriesResidual> {
    residual_series(model, &[i], t, kind)
}

/// Direction of `T_t` versus `T*_t` predicted from the aging class of `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualPrediction {
    /// `W` is DFR: `T_t <=_ST T*_t`.
    UsualBelow,
    /// `W` is IFR: `T_t >=_ST T*_t`.
    UsualAbove,
    /// Both: `T_t =_ST T*_t`.
    Equal,
    /// Neither class, or a target that is not a series system.
    None,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualComparison {
    pub target: String,
    pub t: f64,
    /// `T_t <=_order T*_t` for ST and HR.
    pub usual_below: Vec<OrderReport>,
    /// `T*_t <=_order T_t` for ST and HR.
    pub usual_above: Vec<OrderReport>,
    pub prediction: ResidualPrediction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionReport>,
    /// The ST verdicts match the prediction.
    pub agreement: bool,
}

impl ResidualComparison {
    fn verdict(reports: &[OrderReport], order: Order) -> bool {
        reports.iter().any(|r| r.order == order && r.holds())
    }

    pub fn usual_below_st(&self) -> bool {
        Self::verdict(&self.usual_below, Order::ST)
    }

    pub fn usual_above_st(&self) -> bool {
        Self::verdict(&self.usual_above, Order::ST)
    }

    pub fn usual_below_hr(&self) -> bool {
        Self::verdict(&self.usual_below, Order::HR)
    }

    pub fn usual_above_hr(&self) -> bool {
        Self::verdict(&self.usual_above, Order::HR)
    }
}

/// Series set of a target, if the target is a series system.
fn series_set(model: &TteModel, target: &Target) -> Option<Vec<usize>> {
    match target {
        Target::Component(i) => Some(vec![*i]),
        Target::Series(p) => Some(p.clone()),
        Target::Parallel(p) if p.len() == 1 => Some(p.clone()),
        Target::System if model.structure().is_series() => {
            Some(model.structure().path_sets()[0].to_one_based())
        }
        _ => None,
    }
}

/// Compares `T_t` and `T*_t` in ST and HR in both directions and checks the
/// grid verdicts against the DFR/IFR prediction.
///
/// Without a grid, one is chosen from both residuals via [`Grid::auto_for`].
pub fn compare_residuals(
    model: &TteModel,
    target: &Target,
    t: f64,
    grid: Option<&Grid>,
) -> Result<ResidualComparison> {
    let usual = residual_survival(&ResidualSpec::new(
        model.clone(),
        target.clone(),
        t,
        ResidualKind::Usual,
    ))?;
    let star = residual_survival(&ResidualSpec::new(
        model.clone(),
        target.clone(),
        t,
        ResidualKind::SystemLevel,
    ))?;
    let auto;
    let grid = match grid {
        Some(g) => g,
        None => {
            auto = Grid::auto_for(&[&usual, &star], DEFAULT_POINTS)?;
            &auto
        }
    };
    let orders = [Order::ST, Order::HR];
    let usual_below = check_orders(&orders, &usual, &star, grid)?;
    let usual_above = check_orders(&orders, &star, &usual, grid)?;

    let (prediction, condition) = match series_set(model, target) {
        Some(p) => {
            let input = PropositionInput::single(model).with_subset(&p).with_time(t);
            let rep = evaluate_proposition(PropositionId::ResidualTp2, &input, grid)?;
            let dfr = rep.part("st").is_some_and(|p| p.holds);
            let ifr = rep.part("st_reverse").is_some_and(|p| p.holds);
            let pred = match (dfr, ifr) {
                (true, true) => ResidualPrediction::Equal,
                (true, false) => ResidualPrediction::UsualBelow,
                (false, true) => ResidualPrediction::UsualAbove,
                (false, false) => ResidualPrediction::None,
            };
            (pred, Some(rep))
        }
        None => (ResidualPrediction::None, None),
    };
    let below = ResidualComparison::verdict(&usual_below, Order::ST);
    let above = ResidualComparison::verdict(&usual_above, Order::ST);
    let agreement = match prediction {
        ResidualPrediction::UsualBelow => below,
        ResidualPrediction::UsualAbove => above,
        ResidualPrediction::Equal => below && above,
        ResidualPrediction::None => true,
    };
    Ok(ResidualComparison {
        target: target.to_string(),
        t,
        usual_below,
        usual_above,
        prediction,
        condition,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{BuiltinStructure, Structure};

    fn lin() -> AgingFunction {
        AgingFunction::linear(1.0).unwrap()
    }

    fn model(g: Generator, aging: Vec<AgingFunction>, s: BuiltinStructure) -> TteModel {
        let n = aging.len();
        TteModel::new(g, aging, Structure::builtin(s, n).unwrap()).unwrap()
    }

    fn example_5_3() -> TteModel {
        model(
            Generator::gumbel_barnett(0.5).unwrap(),
            vec![
                AgingFunction::exp_minus_one(1.0, 10.0).unwrap(),
                AgingFunction::exp_minus_one(1.0, 5.0).unwrap(),
                lin(),
            ],
            BuiltinStructure::Series,
        )
    }

    #[test]
    fn normalised_at_zero() {
        let m = model(
            Generator::clayton(1.0, 1.0).unwrap(),
            vec![lin(); 4],
            BuiltinStructure::Aircraft4,
        );
        for kind in [ResidualKind::Usual, ResidualKind::SystemLevel] {
            let r = residual_survival(&ResidualSpec::new(m.clone(), Target::System, 0.7, kind))
                .unwrap();
            assert_eq!(r.survival(0.0), 1.0);
        }
    }

    #[test]
    fn clayton_component_residuals() {
        let m = model(
            Generator::clayton(1.0, 1.0).unwrap(),
            vec![lin(); 2],
            BuiltinStructure::Parallel,
        );
        let usual = residual_component(&m, 1, 1.0, ResidualKind::Usual).unwrap();
        let star = residual_component(&m, 1, 1.0, ResidualKind::SystemLevel).unwrap();
        for x in [0.1, 0.5, 1.0, 3.0, 10.0] {
            assert!((usual.survival(x) - 2.0 / (2.0 + x)).abs() < 1e-14);
            assert!((star.survival(x) - 3.0 / (3.0 + x)).abs() < 1e-14);
            assert!(star.survival(x) >= usual.survival(x));
        }
    }

    #[test]
    fn general_path_matches_closed_form() {
        let m = example_5_3();
        for kind in [ResidualKind::Usual, ResidualKind::SystemLevel] {
            let closed = residual_series(&m, &[1, 2], 1.0, kind).unwrap();
            let general = residual_survival(&ResidualSpec::new(
                m.clone(),
                Target::Series(vec![1, 2]),
                1.0,
                kind,
            ))
            .unwrap();
            for x in [0.01, 0.2, 0.7, 1.5] {
                let (a, b) = (closed.survival(x), general.survival(x));
                assert!(
                    (a - b).abs() <= 1e-12 * a.max(1e-300),
                    "{kind} {x}: {a} {b}"
                );
                let (a, b) = (closed.density(x), general.density(x));
                assert!((a - b).abs() <= 1e-10 * a, "{kind} {x}: {a} {b}");
            }
        }
    }

    #[test]
    fn parallel_two_closed_form() {
        let g = Generator::clayton(2.0, 3.0).unwrap();
        let r1 = AgingFunction::exp_minus_one(1.0, 2.0).unwrap();
        let r2 = AgingFunction::linear(0.5).unwrap();
        let m = model(g, vec![r1.clone(), r2.clone()], BuiltinStructure::Parallel);
        let t = 0.8;
        let star = residual_survival(&ResidualSpec::new(
            m.clone(),
            Target::System,
            t,
            ResidualKind::SystemLevel,
        ))
        .unwrap();
        let usual = residual_survival(&ResidualSpec::new(
            m,
            Target::System,
            t,
            ResidualKind::Usual,
        ))
        .unwrap();
        for x in [0.3, 1.0, 2.5] {
            let (a, b) = (r1.value(x + t), r2.value(x + t));
            let (a0, b0) = (r1.value(t), r2.value(t));
            let want_star = (g.w(a + b0) + g.w(a0 + b) - g.w(a + b)) / g.w(a0 + b0);
            let want = (g.w(a) + g.w(b) - g.w(a + b)) / (g.w(a0) + g.w(b0) - g.w(a0 + b0));
            assert!((star.survival(x) - want_star).abs() < 1e-13);
            assert!((usual.survival(x) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn example_5_3_reverse_order() {
        let m = example_5_3();
        let c = compare_residuals(&m, &Target::Series(vec![1, 2]), 1.0, None).unwrap();
        assert_eq!(c.prediction, ResidualPrediction::UsualAbove);
        assert!(c.usual_above_st());
        assert!(c.usual_above_hr());
        assert!(c.agreement);
    }

    #[test]
    fn underflow_is_rejected() {
        let m = example_5_3();
        let e = residual_series(&m, &[1, 2], 4.0, ResidualKind::SystemLevel).unwrap_err();
        assert!(matches!(e, Error::SurvivalUnderflowAt(_)));
        assert!(matches!(
            residual_series(&m, &[1], -1.0, ResidualKind::Usual),
            Err(Error::NegativeTime(_))
        ));
    }
}
