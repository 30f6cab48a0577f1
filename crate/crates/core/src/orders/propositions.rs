//! Executable sufficient conditions for stochastic comparisons of systems
//! under TTE models.
//!
//! Every proposition is split into parts, one per claimed ordering, and each
//! part into named subconditions. Conditions on `W` alone (log-concavity and
//! friends) come from the generator's aging classification on its own probe
//! grid. Conditions on aging functions are checked on the time grid, and
//! conditions on `W` or `phi_W` along the system are checked on the image of
//! the time grid under the relevant (summed) aging function.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::monotone::{monotone_values, Direction, Witness};
use super::{pointwise_le, Grid, Order};
use crate::error::{Error, Result};
use crate::generators::{AgingClassReport, Generator};
use crate::residual::{residual_series, ResidualKind};
use crate::structure::{BuiltinStructure, Structure};
use crate::tte::{AgingFunction, Lifetime, PhiFunction, TteModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropositionId {
    SeriesCommonW,
    SeriesCommonR,
    Parallel2CommonWSharedMargin,
    Parallel2IdCommonW,
    Parallel2CommonR,
    CoherentCommonR,
    CoherentCommonStructW,
    CoherentCombined,
    ComponentVsSeries,
    SeriesVsParallel,
    SeriesVsParallelCommonR,
    ResidualTp2,
}

impl PropositionId {
    pub const ALL: [PropositionId; 12] = [
        PropositionId::SeriesCommonW,
        PropositionId::SeriesCommonR,
        PropositionId::Parallel2CommonWSharedMargin,
        PropositionId::Parallel2IdCommonW,
        PropositionId::Parallel2CommonR,
        PropositionId::CoherentCommonR,
        PropositionId::CoherentCommonStructW,
        PropositionId::CoherentCombined,
        PropositionId::ComponentVsSeries,
        PropositionId::SeriesVsParallel,
        PropositionId::SeriesVsParallelCommonR,
        PropositionId::ResidualTp2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropositionId::SeriesCommonW => "SERIES_COMMON_W",
            PropositionId::SeriesCommonR => "SERIES_COMMON_R",
            PropositionId::Parallel2CommonWSharedMargin => "PARALLEL2_COMMON_W_SHARED_MARGIN",
            PropositionId::Parallel2IdCommonW => "PARALLEL2_ID_COMMON_W",
            PropositionId::Parallel2CommonR => "PARALLEL2_COMMON_R",
            PropositionId::CoherentCommonR => "COHERENT_COMMON_R",
            PropositionId::CoherentCommonStructW => "COHERENT_COMMON_STRUCT_W",
            PropositionId::CoherentCombined => "COHERENT_COMBINED",
            PropositionId::ComponentVsSeries => "COMPONENT_VS_SERIES",
            PropositionId::SeriesVsParallel => "SERIES_VS_PARALLEL",
            PropositionId::SeriesVsParallelCommonR => "SERIES_VS_PARALLEL_COMMON_R",
            PropositionId::ResidualTp2 => "RESIDUAL_TP2",
        }
    }

    /// Whether the proposition compares two models (otherwise one).
    pub fn takes_pair(self) -> bool {
        !matches!(
            self,
            PropositionId::ComponentVsSeries
                | PropositionId::SeriesVsParallel
                | PropositionId::SeriesVsParallelCommonR
                | PropositionId::ResidualTp2
        )
    }
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropositionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        PropositionId::ALL
            .into_iter()
            .find(|p| p.name() == up)
            .ok_or_else(|| Error::Spec(format!("unknown proposition `{s}`")))
    }
}

impl Serialize for PropositionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Models and extra arguments a proposition is evaluated on.
#[derive(Debug, Clone, Copy)]
pub struct PropositionInput<'a> {
    pub first: &'a TteModel,
    pub second: Option<&'a TteModel>,
    /// Component `i` (1-based) for `COMPONENT_VS_SERIES`.
    pub component: Option<usize>,
    /// Series set `P` (1-based) for `RESIDUAL_TP2`.
    pub subset: Option<&'a [usize]>,
    /// Inspection time for `RESIDUAL_TP2`.
    pub t: Option<f64>,
}

impl<'a> PropositionInput<'a> {
    pub fn single(model: &'a TteModel) -> Self {
        PropositionInput {
            first: model,
            second: None,
            component: None,
            subset: None,
            t: None,
        }
    }

    pub fn pair(first: &'a TteModel, second: &'a TteModel) -> Self {
        PropositionInput {
            second: Some(second),
            ..PropositionInput::single(first)
        }
    }

    pub fn with_component(mut self, i: usize) -> Self {
        self.component = Some(i);
        self
    }

    pub fn with_subset(mut self, p: &'a [usize]) -> Self {
        self.subset = Some(p);
        self
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subcondition {
    pub name: String,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

/// One claimed ordering with the subconditions that guarantee it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartReport {
    pub name: String,
    pub order: Order,
    pub claim: String,
    pub subconditions: Vec<String>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub proposition_id: PropositionId,
    pub parts: Vec<PartReport>,
    pub subconditions: Vec<Subcondition>,
    /// Claims of the parts whose subconditions all hold.
    pub implied_order: Vec<String>,
    /// Conjunction over the evaluated parts.
    pub all_hold: bool,
}

impl ConditionReport {
    fn assemble(
        id: PropositionId,
        parts: Vec<(&str, Order, String, Vec<&str>)>,
        subs: BTreeMap<String, Subcondition>,
    ) -> Self {
        let mut order_of_names: Vec<String> = Vec::new();
        let parts: Vec<PartReport> = parts
            .into_iter()
            .map(|(name, order, claim, names)| {
                for n in &names {
                    if !order_of_names.iter().any(|x| x == n) {
                        order_of_names.push(n.to_string());
                    }
                }
                let holds = names.iter().all(|n| subs[*n].holds);
                PartReport {
                    name: name.to_string(),
                    order,
                    claim,
                    subconditions: names.iter().map(|s| s.to_string()).collect(),
                    holds,
                }
            })
            .collect();
        let subconditions = order_of_names.iter().map(|n| subs[n].clone()).collect();
        let mut r = ConditionReport {
            proposition_id: id,
            parts,
            subconditions,
            implied_order: Vec::new(),
            all_hold: false,
        };
        r.refresh();
        r
    }

    fn refresh(&mut self) {
        self.implied_order = self
            .parts
            .iter()
            .filter(|p| p.holds)
            .map(|p| p.claim.clone())
            .collect();
        self.all_hold = self.parts.iter().all(|p| p.holds);
    }

    /// Names of the available parts (`st`, `hr`, `rhr`, `lr`, `st_reverse`).
    pub fn part_names(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn part(&self, name: &str) -> Option<&PartReport> {
        self.parts.iter().find(|p| p.name == name)
    }

    pub fn subcondition(&self, name: &str) -> Option<&Subcondition> {
        self.subconditions.iter().find(|s| s.name == name)
    }

    /// Restricts the report to the named parts and recomputes `all_hold`.
    pub fn select(mut self, names: &[&str]) -> Result<Self> {
        for n in names {
            if self.part(n).is_none() {
                return Err(Error::Spec(format!(
                    "{} has no part `{n}` (available: {})",
                    self.proposition_id,
                    self.part_names().join(", ")
                )));
            }
        }
        self.parts.retain(|p| names.contains(&p.name.as_str()));
        let keep: Vec<String> = self
            .parts
            .iter()
            .flat_map(|p| p.subconditions.iter().cloned())
            .collect();
        self.subconditions.retain(|s| keep.contains(&s.name));
        self.refresh();
        Ok(self)
    }
}

fn wrong(id: PropositionId, detail: impl Into<String>) -> Error {
    Error::WrongInputShape {
        proposition: id.name(),
        detail: detail.into(),
    }
}

fn claim(order: Order, rel: &str, lhs: &str, rhs: &str) -> String {
    format!("{lhs} {rel}_{order} {rhs}")
}

/// Accumulates subconditions keyed by name.
struct Subs {
    map: BTreeMap<String, Subcondition>,
    slack: f64,
    clip_ln: f64,
}

impl Subs {
    fn new(grid: &Grid) -> Self {
        Subs {
            map: BTreeMap::new(),
            slack: grid.slack(),
            clip_ln: grid.domain_clip().ln(),
        }
    }

    fn put(&mut self, name: &str, witnesses: Vec<Witness>) {
        self.map.insert(
            name.to_string(),
            Subcondition {
                name: name.to_string(),
                holds: witnesses.is_empty(),
                witnesses,
            },
        );
    }

    /// `lhs >= rhs` pointwise, up to `slack * |lhs|`.
    fn ge(&mut self, name: &str, x: &[f64], lhs: &[f64], rhs: &[f64]) {
        let w = relative_le(x, rhs, lhs, self.slack);
        self.put(name, w);
    }

    /// `|lhs - rhs| <= slack * |lhs|` pointwise.
    fn eq(&mut self, name: &str, x: &[f64], lhs: &[f64], rhs: &[f64]) {
        let mut w = relative_le(x, rhs, lhs, self.slack);
        w.extend(relative_le(x, lhs, rhs, self.slack));
        w.sort_by(|a, b| a.t0.total_cmp(&b.t0));
        self.put(name, w);
    }

    fn monotone(&mut self, name: &str, x: &[f64], f: &[f64], dir: Direction) -> Result<()> {
        let m = monotone_values(x, f, self.slack, dir)?;
        self.put(name, m.witnesses);
        Ok(())
    }

    /// Increasing log ratio that equals 0 at `x = 0` (`at_zero`) or as
    /// `x -> inf` (otherwise).
    fn anchored(&mut self, name: &str, x: &[f64], f: &[f64], at_zero: bool) -> Result<()> {
        let (x, f): (Vec<f64>, Vec<f64>) = if at_zero {
            (
                std::iter::once(0.0).chain(x.iter().copied()).collect(),
                std::iter::once(0.0).chain(f.iter().copied()).collect(),
            )
        } else {
            (
                x.iter().copied().chain([f64::INFINITY]).collect(),
                f.iter().copied().chain([0.0]).collect(),
            )
        };
        self.monotone(name, &x, &f, Direction::Increasing)
    }

    /// Increasing and bounded below by `-slack`.
    fn nonneg_increasing(&mut self, name: &str, x: &[f64], f: &[f64]) -> Result<()> {
        let mut w = monotone_values(x, f, self.slack, Direction::Increasing)?.witnesses;
        let zeros = vec![0.0; f.len()];
        w.extend(pointwise_le(x, &zeros, f, self.slack));
        self.put(name, w);
        Ok(())
    }

    fn classes(&mut self, report: &AgingClassReport, which: &[(&str, &str)]) {
        for &(name, class) in which {
            let holds = match class {
                "ifr" => report.ifr,
                "dfr" => report.dfr,
                "ilr" => report.ilr,
                "drfr" => report.drfr,
                _ => unreachable!("unknown aging class"),
            };
            let witnesses = report.witnesses.get(class).cloned().unwrap_or_default();
            debug_assert_eq!(holds, witnesses.is_empty());
            self.put(name, witnesses);
        }
    }

    fn either(&mut self, name: &str, a: &str, b: &str) {
        let (sa, sb) = (&self.map[a], &self.map[b]);
        let witnesses = if sa.holds || sb.holds {
            Vec::new()
        } else {
            sa.witnesses.clone()
        };
        self.put(name, witnesses);
    }
}

fn relative_le(t: &[f64], lhs: &[f64], rhs: &[f64], slack: f64) -> Vec<Witness> {
    t.iter()
        .zip(lhs.iter().zip(rhs))
        .filter(|(_, (&l, &r))| !(l <= r + slack * r.abs()))
        .map(|(&t, (&l, &r))| Witness {
            t0: t,
            t1: t,
            f0: l,
            f1: r,
        })
        .collect()
}

/// Sorted, deduplicated positive finite abscissae.
fn image_grid(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut x: Vec<f64> = values
        .into_iter()
        .filter(|v| v.is_finite() && *v > 0.0)
        .collect();
    x.sort_by(f64::total_cmp);
    x.dedup();
    x
}

fn sum_values(aging: &[AgingFunction], t: f64) -> f64 {
    aging.iter().map(|r| r.value(t)).sum()
}

fn sum_derivs(aging: &[AgingFunction], t: f64) -> f64 {
    aging.iter().map(|r| r.deriv(t)).sum()
}

fn need_second<'a>(id: PropositionId, input: &PropositionInput<'a>) -> Result<&'a TteModel> {
    input.second.ok_or_else(|| wrong(id, "expects two models"))
}

fn need_single(id: PropositionId, input: &PropositionInput<'_>) -> Result<()> {
    if input.second.is_some() {
        return Err(wrong(id, "expects a single model"));
    }
    Ok(())
}

fn need_n(id: PropositionId, m: &TteModel, n: usize) -> Result<()> {
    if m.n() != n {
        return Err(wrong(id, format!("expects {n} components, got {}", m.n())));
    }
    Ok(())
}

fn need_same_w(id: PropositionId, a: &TteModel, b: &TteModel) -> Result<()> {
    if a.generator() != b.generator() {
        return Err(wrong(id, "models must share the generator W"));
    }
    Ok(())
}

fn need_id(id: PropositionId, m: &TteModel) -> Result<AgingFunction> {
    m.common_aging()
        .cloned()
        .map_err(|_| wrong(id, "components must be identically distributed"))
}

fn parallel2_phi(g: Generator) -> Result<PhiFunction> {
    PhiFunction::new(g, &Structure::builtin(BuiltinStructure::Parallel, 2)?)
}

/// Conditions comparing two `phi` functions along a common aging `R`.
fn phi_pair_conditions(
    subs: &mut Subs,
    phi1: &PhiFunction,
    phi2: &PhiFunction,
    x_all: &[f64],
) -> Result<()> {
    let p1: Vec<f64> = x_all.iter().map(|&x| phi1.value(x)).collect();
    let p2: Vec<f64> = x_all.iter().map(|&x| phi2.value(x)).collect();
    subs.ge("phi1_le_phi2", x_all, &p2, &p1);

    let x = clip_phi(subs.clip_ln, x_all, &[phi1, phi2]);
    let f: Vec<f64> = x
        .iter()
        .map(|&x| phi2.ln_value(x) - phi1.ln_value(x))
        .collect();
    subs.anchored("phi2_over_phi1_increasing", &x, &f, true)?;
    let f: Vec<f64> = x
        .iter()
        .map(|&x| phi2.complement(x).ln() - phi1.complement(x).ln())
        .collect();
    subs.anchored("phibar2_over_phibar1_increasing", &x, &f, false)?;
    let f: Vec<f64> = x
        .iter()
        .map(|&x| phi2.ln_neg_d1(x) - phi1.ln_neg_d1(x))
        .collect();
    subs.monotone("dphi2_over_dphi1_increasing", &x, &f, Direction::Increasing)?;
    Ok(())
}

fn clip_phi(clip_ln: f64, x: &[f64], phis: &[&PhiFunction]) -> Vec<f64> {
    x.iter()
        .copied()
        .filter(|&x| {
            phis.iter().all(|p| {
                p.ln_value(x) >= clip_ln
                    && p.complement(x) >= super::CDF_FLOOR
                    && p.ln_neg_d1(x).is_finite()
            })
        })
        .collect()
}

/// Shape conditions on a single `phi_W`, with names suffixed by `suffix`.
fn phi_kernel_conditions(
    subs: &mut Subs,
    phi: &PhiFunction,
    x_all: &[f64],
    suffix: &str,
) -> Result<()> {
    let x = clip_phi(subs.clip_ln, x_all, &[phi]);
    let f: Vec<f64> = x
        .iter()
        .map(|&x| (phi.ln_neg_d1(x) - phi.ln_value(x)).exp())
        .collect();
    subs.monotone(
        &format!("neg_dphi_over_phi_increasing{suffix}"),
        &x,
        &f,
        Direction::Increasing,
    )?;
    let f: Vec<f64> = x
        .iter()
        .map(|&x| (phi.ln_neg_d1(x) - phi.complement(x).ln()).exp())
        .collect();
    subs.monotone(
        &format!("neg_dphi_over_phibar_decreasing{suffix}"),
        &x,
        &f,
        Direction::Decreasing,
    )?;
    let f: Vec<f64> = x
        .iter()
        .map(|&x| phi.d2(x) / phi.ln_neg_d1(x).exp())
        .collect();
    subs.nonneg_increasing(
        &format!("neg_d2phi_over_dphi_nonneg_increasing{suffix}"),
        &x,
        &f,
    )?;
    Ok(())
}

/// `R >= S`, `R' >= S'`, `R' <= S'` and `S'/R'` increasing on the time grid.
fn aging_pair_conditions(
    subs: &mut Subs,
    t: &[f64],
    r: impl Fn(f64) -> f64,
    s: impl Fn(f64) -> f64,
    dr: impl Fn(f64) -> f64,
    ds: impl Fn(f64) -> f64,
    names: [&str; 4],
) -> Result<()> {
    let rv: Vec<f64> = t.iter().map(|&x| r(x)).collect();
    let sv: Vec<f64> = t.iter().map(|&x| s(x)).collect();
    let drv: Vec<f64> = t.iter().map(|&x| dr(x)).collect();
    let dsv: Vec<f64> = t.iter().map(|&x| ds(x)).collect();
    subs.ge(names[0], t, &rv, &sv);
    subs.ge(names[1], t, &drv, &dsv);
    subs.ge(names[2], t, &dsv, &drv);
    // Past overflow of either aging the ratio carries no information.
    let (tf, f): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(drv.iter().zip(&dsv))
        .map(|(&x, (a, b))| (x, b.ln() - a.ln()))
        .filter(|(_, v)| v.is_finite())
        .unzip();
    subs.monotone(names[3], &tf, &f, Direction::Increasing)?;
    Ok(())
}

const ID_NAMES: [&str; 4] = ["r_ge_s", "dr_ge_ds", "dr_le_ds", "ds_over_dr_increasing"];

/// Evaluates every part of proposition `id` on `input` over `grid`.
pub fn evaluate_proposition(
    id: PropositionId,
    input: &PropositionInput<'_>,
    grid: &Grid,
) -> Result<ConditionReport> {
    use Order::*;
    let t = grid.points();
    let mut subs = Subs::new(grid);
    let a = input.first;
    let (t1, t2) = ("T1", "T2");
    let le = "<=";

    let parts: Vec<(&str, Order, String, Vec<&str>)> = match id {
        PropositionId::SeriesCommonW => {
            let b = need_second(id, input)?;
            need_same_w(id, a, b)?;
            need_n(id, b, a.n())?;
            aging_pair_conditions(
                &mut subs,
                t,
                |x| sum_values(a.aging(), x),
                |x| sum_values(b.aging(), x),
                |x| sum_derivs(a.aging(), x),
                |x| sum_derivs(b.aging(), x),
                [
                    "sum_r_ge_sum_s",
                    "sum_dr_ge_sum_ds",
                    "sum_dr_le_sum_ds",
                    "sum_ds_over_sum_dr_increasing",
                ],
            )?;
            let cls = a.generator().classify_default()?;
            subs.classes(
                &cls,
                &[
                    ("w_log_concave", "ifr"),
                    ("w_bar_log_concave", "drfr"),
                    ("neg_dw_log_concave", "ilr"),
                ],
            );
            vec![
                ("st", ST, claim(ST, le, t1, t2), vec!["sum_r_ge_sum_s"]),
                (
                    "hr",
                    HR,
                    claim(HR, le, t1, t2),
                    vec!["sum_r_ge_sum_s", "sum_dr_ge_sum_ds", "w_log_concave"],
                ),
                (
                    "rhr",
                    RHR,
                    claim(RHR, le, t1, t2),
                    vec!["sum_r_ge_sum_s", "sum_dr_le_sum_ds", "w_bar_log_concave"],
                ),
                (
                    "lr",
                    LR,
                    claim(LR, le, t1, t2),
                    vec![
                        "sum_r_ge_sum_s",
                        "sum_dr_ge_sum_ds",
                        "sum_ds_over_sum_dr_increasing",
                        "neg_dw_log_concave",
                    ],
                ),
            ]
        }

        PropositionId::SeriesCommonR => {
            let b = need_second(id, input)?;
            need_n(id, b, a.n())?;
            if a.aging() != b.aging() {
                return Err(wrong(id, "models must share the aging functions"));
            }
            let (w1, w2) = (a.generator(), b.generator());
            let x_all = image_grid(t.iter().map(|&x| sum_values(a.aging(), x)));
            let v1: Vec<f64> = x_all.iter().map(|&x| w1.w(x)).collect();
            let v2: Vec<f64> = x_all.iter().map(|&x| w2.w(x)).collect();
            subs.ge("w1_le_w2", &x_all, &v2, &v1);
            let x: Vec<f64> = x_all
                .iter()
                .copied()
                .filter(|&x| w1.ln_w(x) >= subs.clip_ln && w2.ln_w(x) >= subs.clip_ln)
                .collect();
            let f: Vec<f64> = x.iter().map(|&x| w2.ln_w(x) - w1.ln_w(x)).collect();
            subs.anchored("w2_over_w1_increasing", &x, &f, true)?;
            let f: Vec<f64> = x
                .iter()
                .map(|&x| w2.w_bar(x).ln() - w1.w_bar(x).ln())
                .collect();
            subs.anchored("wbar2_over_wbar1_increasing", &x, &f, false)?;
            let f: Vec<f64> = x
                .iter()
                .map(|&x| w2.ln_neg_dw(x) - w1.ln_neg_dw(x))
                .collect();
            subs.monotone("dw2_over_dw1_increasing", &x, &f, Direction::Increasing)?;
            vec![
                ("st", ST, claim(ST, le, t1, t2), vec!["w1_le_w2"]),
                (
                    "hr",
                    HR,
                    claim(HR, le, t1, t2),
                    vec!["w2_over_w1_increasing"],
                ),
                (
                    "rhr",
                    RHR,
                    claim(RHR, le, t1, t2),
                    vec!["wbar2_over_wbar1_increasing"],
                ),
                (
                    "lr",
                    LR,
                    claim(LR, le, t1, t2),
                    vec!["dw2_over_dw1_increasing"],
                ),
            ]
        }

        PropositionId::Parallel2CommonWSharedMargin => {
            let b = need_second(id, input)?;
            need_n(id, a, 2)?;
            need_n(id, b, 2)?;
            need_same_w(id, a, b)?;
            let (ra, rb) = (a.aging(), b.aging());
            let r1: Vec<f64> = t.iter().map(|&x| ra[0].value(x)).collect();
            let s1: Vec<f64> = t.iter().map(|&x| rb[0].value(x)).collect();
            let r2: Vec<f64> = t.iter().map(|&x| ra[1].value(x)).collect();
            let s2: Vec<f64> = t.iter().map(|&x| rb[1].value(x)).collect();
            subs.eq("r1_eq_s1", t, &r1, &s1);
            subs.ge("r2_ge_s2", t, &r2, &s2);
            vec![(
                "st",
                ST,
                claim(ST, le, t1, t2),
                vec!["r1_eq_s1", "r2_ge_s2"],
            )]
        }

        PropositionId::Parallel2IdCommonW | PropositionId::CoherentCommonStructW => {
            let b = need_second(id, input)?;
            need_same_w(id, a, b)?;
            let (r, s) = (need_id(id, a)?, need_id(id, b)?);
            let phi = if id == PropositionId::Parallel2IdCommonW {
                need_n(id, a, 2)?;
                need_n(id, b, 2)?;
                parallel2_phi(a.generator())?
            } else {
                if a.structure() != b.structure() {
                    return Err(wrong(id, "systems must share the structure"));
                }
                a.id_phi()?
            };
            aging_pair_conditions(
                &mut subs,
                t,
                |x| r.value(x),
                |x| s.value(x),
                |x| r.deriv(x),
                |x| s.deriv(x),
                ID_NAMES,
            )?;
            let x = image_grid(t.iter().flat_map(|&x| [r.value(x), s.value(x)]));
            phi_kernel_conditions(&mut subs, &phi, &x, "")?;
            vec![
                ("st", ST, claim(ST, le, t1, t2), vec!["r_ge_s"]),
                (
                    "hr",
                    HR,
                    claim(HR, le, t1, t2),
                    vec!["r_ge_s", "dr_ge_ds", "neg_dphi_over_phi_increasing"],
                ),
                (
                    "rhr",
                    RHR,
                    claim(RHR, le, t1, t2),
                    vec!["r_ge_s", "dr_le_ds", "neg_dphi_over_phibar_decreasing"],
                ),
                (
                    "lr",
                    LR,
                    claim(LR, le, t1, t2),
                    vec![
                        "r_ge_s",
                        "dr_ge_ds",
                        "ds_over_dr_increasing",
                        "neg_d2phi_over_dphi_nonneg_increasing",
                    ],
                ),
            ]
        }

        PropositionId::Parallel2CommonR | PropositionId::CoherentCommonR => {
            let b = need_second(id, input)?;
            let (r, s) = (need_id(id, a)?, need_id(id, b)?);
            if r != s {
                return Err(wrong(id, "models must share the aging function R"));
            }
            let (phi1, phi2) = if id == PropositionId::Parallel2CommonR {
                need_n(id, a, 2)?;
                need_n(id, b, 2)?;
                (parallel2_phi(a.generator())?, parallel2_phi(b.generator())?)
            } else {
                (a.id_phi()?, b.id_phi()?)
            };
            let x = image_grid(t.iter().map(|&x| r.value(x)));
            phi_pair_conditions(&mut subs, &phi1, &phi2, &x)?;
            vec![
                ("st", ST, claim(ST, le, t1, t2), vec!["phi1_le_phi2"]),
                (
                    "hr",
                    HR,
                    claim(HR, le, t1, t2),
                    vec!["phi2_over_phi1_increasing"],
                ),
                (
                    "rhr",
                    RHR,
                    claim(RHR, le, t1, t2),
                    vec!["phibar2_over_phibar1_increasing"],
                ),
                (
                    "lr",
                    LR,
                    claim(LR, le, t1, t2),
                    vec!["dphi2_over_dphi1_increasing"],
                ),
            ]
        }

        PropositionId::CoherentCombined => {
            let b = need_second(id, input)?;
            if a.structure() != b.structure() {
                return Err(wrong(id, "systems must share the structure"));
            }
            let (r, s) = (need_id(id, a)?, need_id(id, b)?);
            let (phi1, phi2) = (a.id_phi()?, b.id_phi()?);
            aging_pair_conditions(
                &mut subs,
                t,
                |x| r.value(x),
                |x| s.value(x),
                |x| r.deriv(x),
                |x| s.deriv(x),
                ID_NAMES,
            )?;
            // phi1 is compared along both R and S; phi2 along S.
            let x = image_grid(t.iter().flat_map(|&x| [r.value(x), s.value(x)]));
            phi_pair_conditions(&mut subs, &phi1, &phi2, &x)?;
            phi_kernel_conditions(&mut subs, &phi1, &x, "_1")?;
            phi_kernel_conditions(&mut subs, &phi2, &x, "_2")?;
            subs.either(
                "neg_dphi_over_phi_increasing_1_or_2",
                "neg_dphi_over_phi_increasing_1",
                "neg_dphi_over_phi_increasing_2",
            );
            subs.either(
                "neg_dphi_over_phibar_decreasing_1_or_2",
                "neg_dphi_over_phibar_decreasing_1",
                "neg_dphi_over_phibar_decreasing_2",
            );
            subs.either(
                "neg_d2phi_over_dphi_nonneg_increasing_1_or_2",
                "neg_d2phi_over_dphi_nonneg_increasing_1",
                "neg_d2phi_over_dphi_nonneg_increasing_2",
            );
            vec![
                (
                    "st",
                    ST,
                    claim(ST, le, t1, t2),
                    vec!["r_ge_s", "phi1_le_phi2"],
                ),
                (
                    "hr",
                    HR,
                    claim(HR, le, t1, t2),
                    vec![
                        "r_ge_s",
                        "dr_ge_ds",
                        "phi2_over_phi1_increasing",
                        "neg_dphi_over_phi_increasing_1_or_2",
                    ],
                ),
                (
                    "rhr",
                    RHR,
                    claim(RHR, le, t1, t2),
                    vec![
                        "r_ge_s",
                        "dr_le_ds",
                        "phibar2_over_phibar1_increasing",
                        "neg_dphi_over_phibar_decreasing_1_or_2",
                    ],
                ),
                (
                    "lr",
                    LR,
                    claim(LR, le, t1, t2),
                    vec![
                        "r_ge_s",
                        "dr_ge_ds",
                        "ds_over_dr_increasing",
                        "dphi2_over_dphi1_increasing",
                        "neg_d2phi_over_dphi_nonneg_increasing_1_or_2",
                    ],
                ),
            ]
        }

        PropositionId::ComponentVsSeries => {
            need_single(id, input)?;
            let n = a.n();
            let i = input
                .component
                .ok_or_else(|| wrong(id, "needs a component index"))?;
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            let cls = a.generator().classify_default()?;
            subs.classes(
                &cls,
                &[("w_log_concave", "ifr"), ("neg_dw_log_concave", "ilr")],
            );
            let rate = |k: usize, x: f64| a.aging()[k].deriv2(x) / a.aging()[k].deriv(x);
            let lhs: Vec<f64> = t.iter().map(|&x| rate(i - 1, x)).collect();
            let rhs: Vec<f64> = t
                .iter()
                .map(|&x| {
                    if n == 1 {
                        return f64::NEG_INFINITY;
                    }
                    (0..n)
                        .filter(|&j| j != i - 1)
                        .map(|j| rate(j, x))
                        .sum::<f64>()
                        / (n - 1) as f64
                })
                .collect();
            if n == 1 {
                subs.put("cond_lr", Vec::new());
            } else {
                subs.ge("cond_lr", t, &lhs, &rhs);
            }
            subs.put("always", Vec::new());
            let xi = format!("X_{i}");
            vec![
                ("st", ST, claim(ST, le, "X_{1:n}", &xi), vec!["always"]),
                (
                    "hr",
                    HR,
                    claim(HR, le, "X_{1:n}", &xi),
                    vec!["w_log_concave"],
                ),
                (
                    "lr",
                    LR,
                    claim(LR, le, "X_{1:n}", &xi),
                    vec!["neg_dw_log_concave", "cond_lr"],
                ),
            ]
        }

        PropositionId::SeriesVsParallel => {
            need_single(id, input)?;
            need_n(id, a, 2)?;
            let cls = a.generator().classify_default()?;
            subs.classes(&cls, &[("w_log_concave", "ifr")]);
            subs.put("always", Vec::new());
            vec![
                (
                    "st",
                    ST,
                    claim(ST, le, "X_{1:2}", "X_{2:2}"),
                    vec!["always"],
                ),
                (
                    "hr",
                    HR,
                    claim(HR, le, "X_{1:2}", "X_{2:2}"),
                    vec!["w_log_concave"],
                ),
            ]
        }

        PropositionId::SeriesVsParallelCommonR => {
            need_single(id, input)?;
            need_n(id, a, 2)?;
            let r = need_id(id, a)?;
            let w = a.generator();
            let x: Vec<f64> = image_grid(t.iter().map(|&x| r.value(x)))
                .into_iter()
                .filter(|&x| w.ln_w(2.0 * x) >= subs.clip_ln)
                .collect();
            let f: Vec<f64> = x.iter().map(|&x| w.ln_w(x) - w.ln_w(2.0 * x)).collect();
            subs.anchored("w_over_w2x_increasing", &x, &f, true)?;
            let f: Vec<f64> = x
                .iter()
                .map(|&x| w.w_bar(x).ln() - w.w_bar(2.0 * x).ln())
                .collect();
            subs.anchored("wbar_over_wbar2x_increasing", &x, &f, false)?;
            let f: Vec<f64> = x
                .iter()
                .map(|&x| w.ln_neg_dw(x) - w.ln_neg_dw(2.0 * x))
                .collect();
            subs.monotone("dw_over_dw2x_increasing", &x, &f, Direction::Increasing)?;
            subs.put("always", Vec::new());
            let (s, p) = ("X_{1:2}", "X_{2:2}");
            vec![
                ("st", ST, claim(ST, le, s, p), vec!["always"]),
                ("hr", HR, claim(HR, le, s, p), vec!["w_over_w2x_increasing"]),
                (
                    "rhr",
                    RHR,
                    claim(RHR, le, s, p),
                    vec!["wbar_over_wbar2x_increasing"],
                ),
                (
                    "lr",
                    LR,
                    claim(LR, le, s, p),
                    vec!["dw_over_dw2x_increasing"],
                ),
            ]
        }

        PropositionId::ResidualTp2 => {
            need_single(id, input)?;
            residual_target(id, input)?;
            let cls = a.generator().classify_default()?;
            subs.classes(&cls, &[("w_dfr", "dfr"), ("w_ifr", "ifr")]);
            vec![
                ("st", ST, claim(ST, "<=", "T_t", "T*_t"), vec!["w_dfr"]),
                (
                    "st_reverse",
                    ST,
                    claim(ST, ">=", "T_t", "T*_t"),
                    vec!["w_ifr"],
                ),
            ]
        }
    };

    Ok(ConditionReport::assemble(id, parts, subs.map))
}

fn residual_target<'a>(
    id: PropositionId,
    input: &PropositionInput<'a>,
) -> Result<(&'a [usize], f64)> {
    let p = input
        .subset
        .ok_or_else(|| wrong(id, "needs the series set P"))?;
    let t = input
        .t
        .ok_or_else(|| wrong(id, "needs the inspection time t"))?;
    Ok((p, t))
}

/// The two lifetimes a proposition compares, ordered as in its claims
/// (`T1` first). For `RESIDUAL_TP2` these are `(T_t, T*_t)`.
pub fn compared_lifetimes(
    id: PropositionId,
    input: &PropositionInput<'_>,
) -> Result<(Box<dyn Lifetime>, Box<dyn Lifetime>)> {
    let a = input.first;
    let all: Vec<usize> = (1..=a.n()).collect();
    let boxed = |x: crate::tte::TermLifetime| -> Box<dyn Lifetime> { Box::new(x) };
    Ok(match id {
        PropositionId::SeriesCommonW | PropositionId::SeriesCommonR => {
            let b = need_second(id, input)?;
            (boxed(a.series(&all)?), boxed(b.series(&all)?))
        }
        PropositionId::Parallel2CommonWSharedMargin
        | PropositionId::Parallel2IdCommonW
        | PropositionId::Parallel2CommonR => {
            let b = need_second(id, input)?;
            (boxed(a.parallel(&[])?), boxed(b.parallel(&[])?))
        }
        PropositionId::CoherentCommonR
        | PropositionId::CoherentCommonStructW
        | PropositionId::CoherentCombined => {
            let b = need_second(id, input)?;
            (boxed(a.system()?), boxed(b.system()?))
        }
        PropositionId::ComponentVsSeries => {
            let i = input
                .component
                .ok_or_else(|| wrong(id, "needs a component index"))?;
            (boxed(a.series(&all)?), boxed(a.marginal(i)?))
        }
        PropositionId::SeriesVsParallel | PropositionId::SeriesVsParallelCommonR => {
            (boxed(a.series(&all)?), boxed(a.parallel(&[])?))
        }
        PropositionId::ResidualTp2 => {
            let (p, t) = residual_target(id, input)?;
            (
                Box::new(residual_series(a, p, t, ResidualKind::Usual)?),
                Box::new(residual_series(a, p, t, ResidualKind::SystemLevel)?),
            )
        }
    })
}
