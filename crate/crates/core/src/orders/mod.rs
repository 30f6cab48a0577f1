//! Grid certificates for the ST, HR, RHR and LR stochastic orders.
//!
//! A verdict of `holds` means no violation was found on the grid at the
//! configured slack; failures carry the offending grid points as witnesses.
//! Ratio checks work on log survivals, log cdfs or log densities and stop
//! where either survival drops below the grid's clip floor (its square for
//! LR). The HR ratio is
//! anchored at 1 for `t = 0` and the RHR ratio at 1 for `t = inf`; RHR and
//! LR also skip points where either cdf is below [`CDF_FLOOR`].

pub mod monotone;
pub mod propositions;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tte::Lifetime;
use monotone::{monotone_values, Direction, Witness};

pub use propositions::{
    compared_lifetimes, evaluate_proposition, ConditionReport, PartReport, PropositionId,
    PropositionInput, Subcondition,
};

pub const DEFAULT_SLACK: f64 = 1e-9;
pub const DEFAULT_CLIP: f64 = 1e-12;
pub const DEFAULT_POINTS: usize = 1024;
pub const MIN_POINTS: usize = 16;
/// Survival level that fixes the right end of automatic grids.
pub const AUTO_SURVIVAL_LEVEL: f64 = 1e-12;
/// Survival level that ends the linear half of automatic grids.
pub const AUTO_LINEAR_LEVEL: f64 = 1e-6;
/// Cdf level at which automatic grids start their log-spaced part.
pub const AUTO_CDF_LEVEL: f64 = 1e-6;
/// Both cdfs must reach this level for a point to enter the RHR and LR domains.
pub const CDF_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    points: Vec<f64>,
    slack: f64,
    domain_clip: f64,
}

impl Grid {
    pub fn new(points: Vec<f64>, slack: f64) -> Result<Self> {
        if points.len() < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{} points, need at least {MIN_POINTS}",
                points.len()
            )));
        }
        if let Some(&bad) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite point {bad}")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(
                "points must be strictly increasing".into(),
            ));
        }
        if !(slack >= 0.0 && slack.is_finite()) {
            return Err(Error::InvalidGrid(format!("slack {slack} must be >= 0")));
        }
        Ok(Grid {
            points,
            slack,
            domain_clip: DEFAULT_CLIP,
        })
    }

    pub fn with_clip(mut self, domain_clip: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&domain_clip) {
            return Err(Error::InvalidGrid(format!(
                "clip floor {domain_clip} must lie in [0, 1)"
            )));
        }
        self.domain_clip = domain_clip;
        Ok(self)
    }

    pub fn with_slack(mut self, slack: f64) -> Result<Self> {
        Grid::new(std::mem::take(&mut self.points), slack)?.with_clip(self.domain_clip)
    }

    /// `points` equally spaced points on `(lo, hi]`, excluding `lo`.
    pub fn linear(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidGrid(format!("empty interval ({lo}, {hi}]")));
        }
        let pts = (1..=points)
            .map(|i| lo + (hi - lo) * i as f64 / points as f64)
            .collect();
        Grid::new(pts, DEFAULT_SLACK)
    }

    /// Half linear on `(0, t_max]`, half log-spaced on `[t_max 1e-3, t_max]`,
    /// merged.
    pub fn auto(t_max: f64, points: usize) -> Result<Self> {
        Grid::auto_range(t_max * 1e-3, t_max, points)
    }

    /// Half linear on `(0, t_max]`, half log-spaced on `[t_min, t_max]`,
    /// merged.
    pub fn auto_range(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        Grid::auto_split(t_min, t_max, t_max, points)
    }

    /// Half linear on `(0, t_lin]`, half log-spaced on `[t_min, t_max]`,
    /// merged.
    pub fn auto_split(t_min: f64, t_lin: f64, t_max: f64, points: usize) -> Result<Self> {
        if !(t_lin > 0.0 && t_lin <= t_max) {
            return Err(Error::InvalidGrid(format!(
                "t_lin {t_lin} must lie in (0, {t_max}]"
            )));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "t_max {t_max} must be positive"
            )));
        }
        if !(t_min > 0.0 && t_min < t_max) {
            return Err(Error::InvalidGrid(format!(
                "t_min {t_min} must lie in (0, {t_max})"
            )));
        }
        if points < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{points} points, need at least {MIN_POINTS}"
            )));
        }
        let n_lin = points / 2;
        let n_log = points - n_lin;
        let lo = t_min.ln();
        let hi = t_max.ln();
        let mut pts: Vec<f64> = (0..n_log)
            .map(|i| (lo + (hi - lo) * i as f64 / (n_log - 1) as f64).exp())
            .collect();
        pts.extend((1..=n_lin).map(|i| t_lin * i as f64 / (n_lin + 1) as f64));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        if let Some(last) = pts.last_mut() {
            *last = t_max;
        }
        Grid::new(pts, DEFAULT_SLACK)
    }

    /// [`Grid::auto_split`] from the earliest time at which one of
    /// `lifetimes` reaches cdf `1e-6` (but at least `1e-20 t_max` and at most
    /// `1e-3 t_max`) to the latest time at which one reaches survival `1e-12`.
    /// The linear half ends where the last one reaches survival `1e-6`.
    pub fn auto_for(lifetimes: &[&dyn Lifetime], points: usize) -> Result<Self> {
        Grid::auto_for_to(lifetimes, None, points)
    }

    /// [`Grid::auto_for`] with an optional fixed right end.
    pub fn auto_for_to(
        lifetimes: &[&dyn Lifetime],
        t_max: Option<f64>,
        points: usize,
    ) -> Result<Self> {
        let latest = |level: f64| {
            lifetimes
                .iter()
                .map(|l| time_at_survival(*l, level))
                .fold(0.0, f64::max)
        };
        let (t_lin, t_max) = match t_max {
            Some(t) => (t, t),
            None => {
                let t_max = latest(AUTO_SURVIVAL_LEVEL);
                (latest(AUTO_LINEAR_LEVEL).min(t_max), t_max)
            }
        };
        let t_min = lifetimes
            .iter()
            .map(|l| time_at_cdf(*l, AUTO_CDF_LEVEL))
            .fold(f64::INFINITY, f64::min)
            .clamp(t_max * 1e-20, t_max * 1e-3);
        Grid::auto_split(t_min, t_lin, t_max, points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }

    pub fn domain_clip(&self) -> f64 {
        self.domain_clip
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.points.last().expect("grid has points")
    }
}

/// Smallest `t` (to bisection precision) with `survival(t) <= level`.
pub fn time_at_survival(l: &dyn Lifetime, level: f64) -> f64 {
    let target = level.ln();
    let mut hi = 1.0;
    while l.log_survival(hi) > target {
        hi *= 2.0;
        if hi > 1e12 {
            return hi;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if l.log_survival(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Smallest `t` (to bisection precision) with `cdf(t) >= level`.
pub fn time_at_cdf(l: &dyn Lifetime, level: f64) -> f64 {
    let mut hi = 1.0;
    while l.cdf(hi) < level {
        hi *= 2.0;
        if hi > 1e12 {
            return hi;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if l.cdf(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Order {
    ST,
    HR,
    RHR,
    LR,
}

impl Order {
    pub const ALL: [Order; 4] = [Order::ST, Order::HR, Order::RHR, Order::LR];

    pub fn name(self) -> &'static str {
        match self {
            Order::ST => "ST",
            Order::HR => "HR",
            Order::RHR => "RHR",
            Order::LR => "LR",
        }
    }

    /// Parses a comma-separated list such as `st,hr`.
    pub fn parse_list(s: &str) -> Result<Vec<Order>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let o: Order = part.parse()?;
            if !out.contains(&o) {
                out.push(o);
            }
        }
        if out.is_empty() {
            return Err(Error::Spec("empty order list".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "st" => Ok(Order::ST),
            "hr" => Ok(Order::HR),
            "rhr" => Ok(Order::RHR),
            "lr" => Ok(Order::LR),
            _ => Err(Error::Spec(format!("unknown order `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// Outcome of checking `a <=_order b` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    pub order: Order,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// `[first, last]` grid point actually used after clipping.
    pub checked_range: [f64; 2],
    pub points_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl OrderReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    fn from_witnesses(order: Order, t: &[f64], witnesses: Vec<Witness>) -> Self {
        OrderReport {
            order,
            verdict: if witnesses.is_empty() {
                Verdict::Holds
            } else {
                Verdict::Fails
            },
            witnesses,
            checked_range: [
                t[0],
                t.iter()
                    .rev()
                    .copied()
                    .find(|x| x.is_finite())
                    .unwrap_or(t[0]),
            ],
            points_checked: t.len(),
            note: None,
        }
    }

    fn inconclusive(order: Order, err: &Error) -> Self {
        OrderReport {
            order,
            verdict: Verdict::Inconclusive,
            witnesses: Vec::new(),
            checked_range: [f64::NAN, f64::NAN],
            points_checked: 0,
            note: Some(format!("{}: {err}", err.kind())),
        }
    }
}

/// Pointwise `lhs <= rhs + slack * max(1, |rhs|)` with point witnesses.
pub(crate) fn pointwise_le(t: &[f64], lhs: &[f64], rhs: &[f64], slack: f64) -> Vec<Witness> {
    t.iter()
        .zip(lhs.iter().zip(rhs))
        .filter(|(_, (&l, &r))| !(l <= r + slack * r.abs().max(1.0)))
        .map(|(&t, (&l, &r))| Witness {
            t0: t,
            t1: t,
            f0: l,
            f1: r,
        })
        .collect()
}

/// `a <=_ST b`: `S_a(t) <= S_b(t) + slack` at every grid point.
pub fn check_st(a: &dyn Lifetime, b: &dyn Lifetime, grid: &Grid) -> Result<OrderReport> {
    let t = grid.points();
    let sa: Vec<f64> = t.iter().map(|&x| a.survival(x)).collect();
    let sb: Vec<f64> = t.iter().map(|&x| b.survival(x)).collect();
    if let Some(j) = sa
        .iter()
        .zip(&sb)
        .position(|(x, y)| !x.is_finite() || !y.is_finite())
    {
        return Err(Error::NonFiniteValue(t[j]));
    }
    let witnesses = t
        .iter()
        .zip(sa.iter().zip(&sb))
        .filter(|(_, (&x, &y))| x > y + grid.slack())
        .map(|(&t, (&x, &y))| Witness {
            t0: t,
            t1: t,
            f0: x,
            f1: y,
        })
        .collect();
    Ok(OrderReport::from_witnesses(Order::ST, t, witnesses))
}

/// Grid points where both survivals stay at or above the clip floor.
fn clipped(a: &dyn Lifetime, b: &dyn Lifetime, grid: &Grid) -> Result<Vec<(f64, f64, f64)>> {
    clipped_with(a, b, grid, grid.domain_clip().ln(), 0.0)
}

fn clipped_with(
    a: &dyn Lifetime,
    b: &dyn Lifetime,
    grid: &Grid,
    floor: f64,
    cdf_floor: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    let kept: Vec<(f64, f64, f64)> = grid
        .points()
        .iter()
        .map(|&t| (t, a.log_survival(t), b.log_survival(t)))
        .filter(|&(_, la, lb)| la >= floor && lb >= floor)
        .filter(|&(t, _, _)| cdf_floor == 0.0 || (a.cdf(t) >= cdf_floor && b.cdf(t) >= cdf_floor))
        .collect();
    if kept.len() < MIN_POINTS {
        return Err(Error::DomainCollapsed {
            remaining: kept.len(),
        });
    }
    Ok(kept)
}

fn ratio_report(order: Order, t: &[f64], log_ratio: &[f64], slack: f64) -> Result<OrderReport> {
    let m = monotone_values(t, log_ratio, slack, Direction::Increasing)?;
    Ok(OrderReport::from_witnesses(order, t, m.witnesses))
}

/// `a <=_HR b`: `S_b / S_a` increasing, checked as `ln S_b - ln S_a`.
pub fn check_hr(a: &dyn Lifetime, b: &dyn Lifetime, grid: &Grid) -> Result<OrderReport> {
    let kept = clipped(a, b, grid)?;
    // Both survivals equal 1 at t = 0.
    let t: Vec<f64> = std::iter::once(0.0)
        .chain(kept.iter().map(|k| k.0))
        .collect();
    let lr: Vec<f64> = std::iter::once(0.0)
        .chain(kept.iter().map(|&(_, la, lb)| lb - la))
        .collect();
    ratio_report(Order::HR, &t, &lr, grid.slack())
}

/// `a <=_RHR b`: `F_b / F_a` increasing, checked as `ln F_b - ln F_a`.
pub fn check_rhr(a: &dyn Lifetime, b: &dyn Lifetime, grid: &Grid) -> Result<OrderReport> {
    let kept: Vec<(f64, f64)> = clipped_with(a, b, grid, grid.domain_clip().ln(), CDF_FLOOR)?
        .into_iter()
        .map(|(t, _, _)| (t, b.cdf(t).ln() - a.cdf(t).ln()))
        .filter(|(_, r)| r.is_finite())
        .collect();
    if kept.len() < MIN_POINTS {
        return Err(Error::DomainCollapsed {
            remaining: kept.len(),
        });
    }
    // Both cdfs tend to 1 as t grows.
    let t: Vec<f64> = kept.iter().map(|k| k.0).chain([f64::INFINITY]).collect();
    let lr: Vec<f64> = kept.iter().map(|k| k.1).chain([0.0]).collect();
    ratio_report(Order::RHR, &t, &lr, grid.slack())
}

/// `a <=_LR b`: `f_b / f_a` increasing, checked as `ln f_b - ln f_a`.
pub fn check_lr(a: &dyn Lifetime, b: &dyn Lifetime, grid: &Grid) -> Result<OrderReport> {
    // LR looks past the survival clip, down to its square.
    let kept = clipped_with(a, b, grid, 2.0 * grid.domain_clip().ln(), CDF_FLOOR)?;
    let mut t = Vec::with_capacity(kept.len());
    let mut lr = Vec::with_capacity(kept.len());
    for &(x, _, _) in &kept {
        let fa = a.log_density(x);
        if fa == f64::NEG_INFINITY {
            return Err(Error::ZeroDensity(x));
        }
        t.push(x);
        lr.push(b.log_density(x) - fa);
    }
    ratio_report(Order::LR, &t, &lr, grid.slack())
}

pub fn check_order(
    order: Order,
    a: &dyn Lifetime,
    b: &dyn Lifetime,
    grid: &Grid,
) -> Result<OrderReport> {
    match order {
        Order::ST => check_st(a, b, grid),
        Order::HR => check_hr(a, b, grid),
        Order::RHR => check_rhr(a, b, grid),
        Order::LR => check_lr(a, b, grid),
    }
}

/// Runs each order; a collapsed clipped domain becomes `inconclusive`
/// instead of an error.
pub fn check_orders(
    orders: &[Order],
    a: &dyn Lifetime,
    b: &dyn Lifetime,
    grid: &Grid,
) -> Result<Vec<OrderReport>> {
    orders
        .iter()
        .map(|&o| match check_order(o, a, b, grid) {
            Err(e @ Error::DomainCollapsed { .. }) => Ok(OrderReport::inconclusive(o, &e)),
            other => other,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditResult {
    pub consistent: bool,
    pub diagnostics: Vec<String>,
}

/// Flags grid verdicts that contradict `LR => HR, LR => RHR, HR => ST,
/// RHR => ST` (and hence `LR => ST`). Orders missing from `reports` or
/// inconclusive are skipped.
pub fn implication_audit(reports: &[OrderReport]) -> AuditResult {
    let verdict = |o: Order| {
        reports
            .iter()
            .find(|r| r.order == o)
            .map(|r| r.verdict)
            .filter(|v| *v != Verdict::Inconclusive)
    };
    let mut diagnostics = Vec::new();
    for (strong, weak) in [
        (Order::LR, Order::HR),
        (Order::LR, Order::RHR),
        (Order::HR, Order::ST),
        (Order::RHR, Order::ST),
        (Order::LR, Order::ST),
    ] {
        if verdict(strong) == Some(Verdict::Holds) && verdict(weak) == Some(Verdict::Fails) {
            diagnostics.push(format!(
                "{strong} holds but {weak} fails; {strong} implies {weak}, so the grid or slack is misconfigured"
            ));
        }
    }
    AuditResult {
        consistent: diagnostics.is_empty(),
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Generator;
    use crate::structure::{BuiltinStructure, Structure};
    use crate::tte::{AgingFunction, TteModel};

    fn model(g: Generator, aging: Vec<AgingFunction>) -> TteModel {
        let n = aging.len();
        TteModel::new(
            g,
            aging,
            Structure::builtin(BuiltinStructure::Parallel, n).unwrap(),
        )
        .unwrap()
    }

    fn exp1(c: f64) -> AgingFunction {
        AgingFunction::exp_minus_one(c, 1.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![0.0, 1.0], 1e-9).is_err());
        let mut pts: Vec<f64> = (0..20).map(|i| i as f64).collect();
        pts[5] = pts[4];
        assert!(Grid::new(pts, 1e-9).is_err());
        let g = Grid::auto(10.0, 1024).unwrap();
        assert_eq!(g.len(), 1024);
        assert_eq!(g.t_max(), 10.0);
        assert!(g.points()[0] > 0.0);
    }

    #[test]
    fn identical_lifetimes_satisfy_every_order() {
        let m = model(
            Generator::clayton(1.0, 1.0).unwrap(),
            vec![exp1(2.0), exp1(1.0)],
        );
        let a = m.system().unwrap();
        let g = Grid::auto_for(&[&a], 512).unwrap();
        let reports = check_orders(&Order::ALL, &a, &a, &g).unwrap();
        assert!(reports.iter().all(|r| r.holds()), "{reports:?}");
        assert!(implication_audit(&reports).consistent);
    }

    #[test]
    fn series_below_parallel_in_st() {
        let m = model(
            Generator::clayton(1.0, 1.0).unwrap(),
            vec![exp1(2.0), exp1(1.0)],
        );
        let s = m.series(&[1, 2]).unwrap();
        let p = m.parallel(&[]).unwrap();
        let g = Grid::auto_for(&[&s, &p], 1024).unwrap();
        assert!(check_st(&s, &p, &g).unwrap().holds());
        assert!(check_st(&p, &s, &g).unwrap().fails());
    }

    #[test]
    fn clayton_series_vs_components() {
        let m = model(
            Generator::clayton(1.0, 1.0).unwrap(),
            vec![exp1(2.0), exp1(1.0)],
        );
        let s = m.series(&[1, 2]).unwrap();
        let x1 = m.marginal(1).unwrap();
        let x2 = m.marginal(2).unwrap();
        let g = Grid::auto_for(&[&s, &x1, &x2], 1024).unwrap();
        let r = check_hr(&s, &x1, &g).unwrap();
        assert!(r.fails() && !r.witnesses.is_empty());
        assert!(check_hr(&s, &x2, &g).unwrap().holds());
    }

    #[test]
    fn independent_series_vs_component_hr() {
        let m = model(
            Generator::independence(),
            vec![
                AgingFunction::linear(1.0).unwrap(),
                AgingFunction::linear(2.0).unwrap(),
            ],
        );
        let s = m.series(&[1, 2]).unwrap();
        let x2 = m.marginal(2).unwrap();
        let g = Grid::auto_for(&[&s, &x2], 256).unwrap();
        assert!(check_hr(&s, &x2, &g).unwrap().holds());
    }

    #[test]
    fn audit_examples() {
        let rep = |order, verdict| OrderReport {
            order,
            verdict,
            witnesses: if verdict == Verdict::Fails {
                vec![Witness {
                    t0: 1.0,
                    t1: 1.0,
                    f0: 0.0,
                    f1: 0.0,
                }]
            } else {
                vec![]
            },
            checked_range: [0.0, 1.0],
            points_checked: 16,
            note: None,
        };
        use Verdict::*;
        let all = [
            rep(Order::ST, Holds),
            rep(Order::HR, Holds),
            rep(Order::RHR, Holds),
            rep(Order::LR, Holds),
        ];
        assert!(implication_audit(&all).consistent);
        let bad = [rep(Order::LR, Holds), rep(Order::ST, Fails)];
        assert!(!implication_audit(&bad).consistent);
        let bad = [
            rep(Order::LR, Holds),
            rep(Order::HR, Holds),
            rep(Order::ST, Fails),
        ];
        let a = implication_audit(&bad);
        assert!(!a.consistent);
        assert!(!a.diagnostics.is_empty());
        let ok = [rep(Order::HR, Fails), rep(Order::ST, Holds)];
        assert!(implication_audit(&ok).consistent);
    }

    #[test]
    fn collapsed_domain() {
        let m = model(
            Generator::gumbel_barnett(0.5).unwrap(),
            vec![exp1(2.0), exp1(1.0)],
        );
        let s = m.series(&[1, 2]).unwrap();
        let g = Grid::linear(5.0, 6.0, 32).unwrap();
        assert!(matches!(
            check_hr(&s, &s, &g),
            Err(Error::DomainCollapsed { .. })
        ));
        let r = check_orders(&[Order::HR], &s, &s, &g).unwrap();
        assert_eq!(r[0].verdict, Verdict::Inconclusive);
    }
}
