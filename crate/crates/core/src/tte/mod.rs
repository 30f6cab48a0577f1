//! Time-transformed exponential models `TTE(W, R_1, ..., R_n)` and the
//! lifetime functions of coherent systems built on them.
//!
//! System reliability is the inclusion-exclusion sum over the merged union
//! terms of the structure's minimal path sets:
//!
//! ```text
//! S_T(t) = sum_j c_j W( sum_{k in U_j} R_k(t) )
//! f_T(t) = sum_j c_j (-W'( sum_{k in U_j} R_k(t) )) sum_{k in U_j} R'_k(t)
//! ```
//!
//! Sums of signed `W` terms are accumulated around the largest term's log,
//! which keeps parallel tails meaningful after `W` itself underflows.

mod aging;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use aging::{AgingFunction, MarginalAging, TimeFn};

use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::structure::{union_terms, ComponentSet, SignedUnionTerm, Structure};

/// Survival below which the hazard is reported as `+inf`.
pub const HAZARD_UNDERFLOW: f64 = 1e-300;

/// Survival, density and hazard of a nonnegative lifetime.
///
/// Evaluators are pure; for `t < 0` the survival is 1 and the density 0.
pub trait Lifetime: Send + Sync {
    fn log_survival(&self, t: f64) -> f64;

    fn survival(&self, t: f64) -> f64 {
        self.log_survival(t).exp()
    }

    /// `1 - survival`, computed without cancellation where possible.
    fn cdf(&self, t: f64) -> f64 {
        -self.log_survival(t).exp_m1()
    }

    fn density(&self, t: f64) -> f64;

    fn log_density(&self, t: f64) -> f64 {
        self.density(t).ln()
    }

    fn hazard(&self, t: f64) -> f64 {
        let ls = self.log_survival(t);
        if ls < HAZARD_UNDERFLOW.ln() {
            return f64::INFINITY;
        }
        (self.log_density(t) - ls).exp()
    }

    /// Short human-readable name used in reports.
    fn label(&self) -> String;
}

impl<L: Lifetime + ?Sized> Lifetime for Box<L> {
    fn log_survival(&self, t: f64) -> f64 {
        (**self).log_survival(t)
    }
    fn survival(&self, t: f64) -> f64 {
        (**self).survival(t)
    }
    fn cdf(&self, t: f64) -> f64 {
        (**self).cdf(t)
    }
    fn density(&self, t: f64) -> f64 {
        (**self).density(t)
    }
    fn log_density(&self, t: f64) -> f64 {
        (**self).log_density(t)
    }
    fn hazard(&self, t: f64) -> f64 {
        (**self).hazard(t)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

/// Sum of `coefficient * exp(log_magnitude)` as `(mantissa, pivot)` with
/// `value = mantissa * exp(pivot)`.
pub(crate) fn signed_log_sum(terms: impl Iterator<Item = (i64, f64)> + Clone) -> (f64, f64) {
    let pivot = terms
        .clone()
        .map(|(_, l)| l)
        .filter(|l| !l.is_nan())
        .fold(f64::NEG_INFINITY, f64::max);
    if pivot == f64::NEG_INFINITY {
        return (0.0, 0.0);
    }
    if pivot == f64::INFINITY {
        let m: f64 = terms
            .filter(|(_, l)| *l == f64::INFINITY)
            .map(|(c, _)| c as f64)
            .sum();
        return (m.signum(), f64::INFINITY);
    }
    let mantissa = terms.map(|(c, l)| c as f64 * (l - pivot).exp()).sum();
    (mantissa, pivot)
}

pub(crate) fn ln_of(sum: (f64, f64)) -> f64 {
    let (m, pivot) = sum;
    if m <= 0.0 {
        f64::NEG_INFINITY
    } else {
        m.ln() + pivot
    }
}

pub(crate) fn value_of(sum: (f64, f64)) -> f64 {
    let (m, pivot) = sum;
    if m == 0.0 {
        0.0
    } else {
        m * pivot.exp()
    }
}

/// Lifetime given by signed union terms over a set of components:
/// components, series, parallel and general coherent systems.
#[derive(Clone)]
pub struct TermLifetime {
    generator: Generator,
    aging: Arc<[AgingFunction]>,
    terms: Vec<SignedUnionTerm>,
    label: String,
}

impl fmt::Debug for TermLifetime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TermLifetime")
            .field("label", &self.label)
            .field("terms", &self.terms)
            .finish()
    }
}

impl TermLifetime {
    pub fn terms(&self) -> &[SignedUnionTerm] {
        &self.terms
    }

    fn aging_values(&self, t: f64) -> Vec<f64> {
        self.aging.iter().map(|r| r.value(t)).collect()
    }

    fn aging_derivs(&self, t: f64) -> Vec<f64> {
        self.aging.iter().map(|r| r.deriv(t)).collect()
    }

    fn density_sum(&self, t: f64) -> (f64, f64) {
        let r = self.aging_values(t);
        let d = self.aging_derivs(t);
        let parts: Vec<(i64, f64)> = self
            .terms
            .iter()
            .map(|term| {
                let s: f64 = term.indices.iter().map(|k| r[k]).sum();
                let ds: f64 = term.indices.iter().map(|k| d[k]).sum();
                (term.coefficient, self.generator.ln_neg_dw(s) + ds.ln())
            })
            .collect();
        signed_log_sum(parts.into_iter())
    }
}

impl Lifetime for TermLifetime {
    fn log_survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let r = self.aging_values(t);
        let parts: Vec<(i64, f64)> = self
            .terms
            .iter()
            .map(|term| {
                let s: f64 = term.indices.iter().map(|k| r[k]).sum();
                (term.coefficient, self.generator.ln_w(s))
            })
            .collect();
        ln_of(signed_log_sum(parts.into_iter())).min(0.0)
    }

    fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        // Coefficients sum to 1, so F = sum_j c_j (1 - W(s_j)).
        let r = self.aging_values(t);
        let f: f64 = self
            .terms
            .iter()
            .map(|term| {
                let s: f64 = term.indices.iter().map(|k| r[k]).sum();
                term.coefficient as f64 * self.generator.w_bar(s)
            })
            .sum();
        f.clamp(0.0, 1.0)
    }

    fn density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        value_of(self.density_sum(t)).max(0.0)
    }

    fn log_density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return f64::NEG_INFINITY;
        }
        ln_of(self.density_sum(t))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// `phi_W(x) = sum_k c_k W(k x)` for identically distributed components.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiFunction {
    generator: Generator,
    coefficients: Vec<(usize, i64)>,
}

impl PhiFunction {
    pub fn new(generator: Generator, structure: &Structure) -> Result<Self> {
        let coefficients = structure.cardinality_coefficients()?.into_iter().collect();
        Ok(PhiFunction {
            generator,
            coefficients,
        })
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    /// `(k, c_k)` pairs in increasing `k`.
    pub fn coefficients(&self) -> &[(usize, i64)] {
        &self.coefficients
    }

    fn kx(k: usize, x: f64) -> f64 {
        k as f64 * x
    }

    pub fn value(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .map(|&(k, c)| c as f64 * self.generator.w(Self::kx(k, x)))
            .sum()
    }

    pub fn ln_value(&self, x: f64) -> f64 {
        let g = self.generator;
        let sum = signed_log_sum(
            self.coefficients
                .iter()
                .map(move |&(k, c)| (c, g.ln_w(Self::kx(k, x)))),
        );
        ln_of(sum).min(0.0)
    }

    /// `1 - phi(x)`.
    pub fn complement(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .map(|&(k, c)| c as f64 * self.generator.w_bar(Self::kx(k, x)))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// `phi'(x) = sum_k c_k k W'(k x)`.
    pub fn d1(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .map(|&(k, c)| (c * k as i64) as f64 * self.generator.dw(Self::kx(k, x)))
            .sum()
    }

    /// `ln(-phi'(x))`.
    pub fn ln_neg_d1(&self, x: f64) -> f64 {
        let g = self.generator;
        ln_of(signed_log_sum(self.coefficients.iter().map(
            move |&(k, c)| (c * k as i64, g.ln_neg_dw(Self::kx(k, x))),
        )))
    }

    /// `phi''(x) = sum_k c_k k^2 W''(k x)`.
    pub fn d2(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .map(|&(k, c)| (c * (k * k) as i64) as f64 * self.generator.d2w(Self::kx(k, x)))
            .sum()
    }
}

/// System lifetime through the ID collapse `S_T(t) = phi_W(R(t))`.
#[derive(Debug, Clone)]
pub struct PhiLifetime {
    phi: PhiFunction,
    aging: AgingFunction,
}

impl PhiLifetime {
    pub fn phi(&self) -> &PhiFunction {
        &self.phi
    }

    pub fn aging(&self) -> &AgingFunction {
        &self.aging
    }
}

impl Lifetime for PhiLifetime {
    fn log_survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.phi.ln_value(self.aging.value(t))
    }

    fn survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        self.phi.value(self.aging.value(t)).min(1.0)
    }

    fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.phi.complement(self.aging.value(t))
    }

    fn density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        (-self.aging.deriv(t) * self.phi.d1(self.aging.value(t))).max(0.0)
    }

    fn log_density(&self, t: f64) -> f64 {
        if t < 0.0 {
            return f64::NEG_INFINITY;
        }
        self.aging.deriv(t).ln() + self.phi.ln_neg_d1(self.aging.value(t))
    }

    fn label(&self) -> String {
        "system(phi)".into()
    }
}

/// `R = W^{-1} o S`: the aging function that reproduces marginal survival
/// `S` under generator `g`.
pub fn aging_from_marginal(
    g: Generator,
    survival: TimeFn,
    density: Option<TimeFn>,
) -> Result<AgingFunction> {
    AgingFunction::from_marginal(g, survival, density)
}

/// Which lifetime of a model to evaluate. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    System,
    Component(usize),
    Series(Vec<usize>),
    /// Parallel over the listed components; empty means all components.
    Parallel(Vec<usize>),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Target::System => write!(f, "system"),
            Target::Component(i) => write!(f, "component:{i}"),
            Target::Series(p) => write!(f, "series:{}", join(p)),
            Target::Parallel(p) if p.is_empty() => write!(f, "parallel"),
            Target::Parallel(p) => write!(f, "parallel:{}", join(p)),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_list = |body: &str| -> Result<Vec<usize>> {
            body.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Spec(format!("bad component index `{x}` in `{s}`")))
                })
                .collect()
        };
        match s.split_once(':') {
            None if s == "system" => Ok(Target::System),
            None if s == "parallel" => Ok(Target::Parallel(Vec::new())),
            Some(("component", i)) => {
                Ok(Target::Component(i.trim().parse().map_err(|_| {
                    Error::Spec(format!("bad component index in `{s}`"))
                })?))
            }
            Some(("series", body)) => Ok(Target::Series(parse_list(body)?)),
            Some(("parallel", body)) => Ok(Target::Parallel(parse_list(body)?)),
            _ => Err(Error::Spec(format!(
                "unknown target `{s}` (expected system, component:i, series:P, parallel[:P])"
            ))),
        }
    }
}

/// `TTE(W, R_1, ..., R_n)` together with a coherent structure.
#[derive(Clone)]
pub struct TteModel {
    generator: Generator,
    aging: Arc<[AgingFunction]>,
    structure: Structure,
}

impl fmt::Debug for TteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TteModel")
            .field("generator", &self.generator)
            .field("aging", &self.aging)
            .field("structure", &self.structure)
            .finish()
    }
}

impl PartialEq for TteModel {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator
            && self.aging[..] == other.aging[..]
            && self.structure == other.structure
    }
}

impl TteModel {
    pub fn new(
        generator: Generator,
        aging: Vec<AgingFunction>,
        structure: Structure,
    ) -> Result<Self> {
        if aging.len() != structure.n() {
            return Err(Error::AgingLengthMismatch {
                expected: structure.n(),
                got: aging.len(),
            });
        }
        Ok(TteModel {
            generator,
            aging: aging.into(),
            structure,
        })
    }

    /// Same aging `R` for all `n` components of `structure`.
    pub fn identical(generator: Generator, aging: AgingFunction, structure: Structure) -> Self {
        let n = structure.n();
        TteModel {
            generator,
            aging: vec![aging; n].into(),
            structure,
        }
    }

    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn aging(&self) -> &[AgingFunction] {
        &self.aging
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    /// Whether the model defines a proper joint law for its system lifetime:
    /// the structure is series, or `n` is within [`Generator::max_dimension`].
    /// Otherwise non-series survival curves may leave `[0, 1]` or fail to
    /// decrease; evaluators clamp them.
    pub fn is_proper(&self) -> bool {
        self.structure.is_series() || self.generator.max_dimension().is_none_or(|d| self.n() <= d)
    }

    /// Copy of the model with another generator.
    pub fn with_generator(&self, generator: Generator) -> Self {
        TteModel {
            generator,
            ..self.clone()
        }
    }

    /// Copy of the model with another structure over the same components.
    pub fn with_structure(&self, structure: Structure) -> Result<Self> {
        TteModel::new(self.generator, self.aging.to_vec(), structure)
    }

    /// `W(R_1(x_1) + ... + R_n(x_n))`.
    pub fn joint_survival(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        if let Some(&neg) = x.iter().find(|&&v| v < 0.0 || v.is_nan()) {
            return Err(Error::NegativeTime(neg));
        }
        let s: f64 = x
            .iter()
            .zip(self.aging.iter())
            .map(|(&xi, r)| r.value(xi))
            .sum();
        Ok(self.generator.w(s))
    }

    /// Sum of `R_k(t)` over a set of components.
    pub fn aging_sum(&self, set: ComponentSet, t: f64) -> f64 {
        set.iter().map(|k| self.aging[k].value(t)).sum()
    }

    /// Sum of `R'_k(t)` over a set of components.
    pub fn aging_deriv_sum(&self, set: ComponentSet, t: f64) -> f64 {
        set.iter().map(|k| self.aging[k].deriv(t)).sum()
    }

    fn term_lifetime(&self, terms: Vec<SignedUnionTerm>, label: String) -> TermLifetime {
        TermLifetime {
            generator: self.generator,
            aging: self.aging.clone(),
            terms,
            label,
        }
    }

    fn set(&self, indices: &[usize]) -> Result<ComponentSet> {
        ComponentSet::from_one_based(indices, self.n())
    }

    /// Component `i` (1-based): `W(R_i(t))`.
    pub fn marginal(&self, i: usize) -> Result<TermLifetime> {
        let set = self.set(&[i])?;
        Ok(self.term_lifetime(
            vec![SignedUnionTerm {
                indices: set,
                coefficient: 1,
            }],
            format!("X_{i}"),
        ))
    }

    /// Series system over `p`: `W(sum_{k in P} R_k(t))`.
    pub fn series(&self, p: &[usize]) -> Result<TermLifetime> {
        let set = self.set(p)?;
        Ok(self.term_lifetime(
            vec![SignedUnionTerm {
                indices: set,
                coefficient: 1,
            }],
            format!("series{set}"),
        ))
    }

    /// Parallel system over `p`; an empty slice means all components.
    pub fn parallel(&self, p: &[usize]) -> Result<TermLifetime> {
        let set = if p.is_empty() {
            ComponentSet::all(self.n())
        } else {
            self.set(p)?
        };
        let singletons: Vec<ComponentSet> = set.iter().map(ComponentSet::singleton).collect();
        Ok(self.term_lifetime(union_terms(&singletons)?, format!("parallel{set}")))
    }

    /// The coherent system lifetime `T`.
    pub fn system(&self) -> Result<TermLifetime> {
        Ok(self.term_lifetime(self.structure.signed_union_terms()?, "T".into()))
    }

    pub fn lifetime(&self, target: &Target) -> Result<TermLifetime> {
        match target {
            Target::System => self.system(),
            Target::Component(i) => self.marginal(*i),
            Target::Series(p) => self.series(p),
            Target::Parallel(p) => self.parallel(p),
        }
    }

    /// Minimal path sets describing `target`, for simulation.
    pub fn target_path_sets(&self, target: &Target) -> Result<Vec<ComponentSet>> {
        match target {
            Target::System => Ok(self.structure.path_sets().to_vec()),
            Target::Component(i) => Ok(vec![self.set(&[*i])?]),
            Target::Series(p) => Ok(vec![self.set(p)?]),
            Target::Parallel(p) => {
                let set = if p.is_empty() {
                    ComponentSet::all(self.n())
                } else {
                    self.set(p)?
                };
                Ok(set.iter().map(ComponentSet::singleton).collect())
            }
        }
    }

    /// The common aging function when all components are identically
    /// distributed (same family and parameters).
    pub fn common_aging(&self) -> Result<&AgingFunction> {
        let first = &self.aging[0];
        if self.aging.iter().all(|r| r == first) {
            Ok(first)
        } else {
            Err(Error::NotIdenticallyDistributed)
        }
    }

    /// `phi_W` of the structure; requires identically distributed components.
    pub fn id_phi(&self) -> Result<PhiFunction> {
        self.common_aging()?;
        PhiFunction::new(self.generator, &self.structure)
    }

    /// System lifetime evaluated through `phi_W(R(t))`.
    pub fn id_lifetime(&self) -> Result<PhiLifetime> {
        let aging = self.common_aging()?.clone();
        Ok(PhiLifetime {
            phi: PhiFunction::new(self.generator, &self.structure)?,
            aging,
        })
    }
}
