use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::generators::Generator;

/// Real-valued function of time, shared between threads.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Aging function `R`: nonnegative, strictly increasing, `R(0) = 0`.
#[derive(Clone)]
pub enum AgingFunction {
    /// `R(t) = c t`.
    Linear { c: f64 },
    /// `R(t) = (e^{c t} - 1) / s`.
    ExpMinusOne { c: f64, s: f64 },
    /// `R(t) = (t / lambda)^k`.
    Power { lambda: f64, k: f64 },
    /// `R = W^{-1} o S` for a user-supplied marginal survival `S`.
    FromMarginal(MarginalAging),
}

/// Aging function recovered from a marginal survival function.
#[derive(Clone)]
pub struct MarginalAging {
    generator: Generator,
    survival: TimeFn,
    density: Option<TimeFn>,
    min_step: f64,
    rel_step: f64,
}

impl MarginalAging {
    /// Overrides the central-difference step `h = max(min_step, rel_step * t)`.
    pub fn with_step(mut self, min_step: f64, rel_step: f64) -> Self {
        self.min_step = min_step;
        self.rel_step = rel_step;
        self
    }

    fn value(&self, t: f64) -> f64 {
        self.generator.inverse((self.survival)(t))
    }

    fn deriv(&self, t: f64) -> f64 {
        if let Some(f) = &self.density {
            // d/dt W^{-1}(S(t)) = -f(t) / W'(R(t))
            let r = self.value(t);
            return -f(t) / self.generator.dw(r);
        }
        let h = self.min_step.max(self.rel_step * t);
        if t >= h {
            (self.value(t + h) - self.value(t - h)) / (2.0 * h)
        } else {
            (self.value(t + h) - self.value(t)) / h
        }
    }
}

impl fmt::Debug for AgingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgingFunction::Linear { c } => write!(f, "Linear {{ c: {c} }}"),
            AgingFunction::ExpMinusOne { c, s } => write!(f, "ExpMinusOne {{ c: {c}, s: {s} }}"),
            AgingFunction::Power { lambda, k } => write!(f, "Power {{ lambda: {lambda}, k: {k} }}"),
            AgingFunction::FromMarginal(m) => {
                write!(f, "FromMarginal {{ generator: {:?} }}", m.generator)
            }
        }
    }
}

/// Structural equality: same family and parameters. Marginal-derived agings
/// are equal only when they share the same survival closure and generator.
impl PartialEq for AgingFunction {
    fn eq(&self, other: &Self) -> bool {
        use AgingFunction::*;
        match (self, other) {
            (Linear { c: a }, Linear { c: b }) => a == b,
            (ExpMinusOne { c: c1, s: s1 }, ExpMinusOne { c: c2, s: s2 }) => c1 == c2 && s1 == s2,
            (Power { lambda: l1, k: k1 }, Power { lambda: l2, k: k2 }) => l1 == l2 && k1 == k2,
            (FromMarginal(a), FromMarginal(b)) => {
                Arc::ptr_eq(&a.survival, &b.survival) && a.generator == b.generator
            }
            _ => false,
        }
    }
}

fn positive(family: &'static str, param: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            family,
            param,
            value,
        })
    }
}

impl AgingFunction {
    pub fn linear(c: f64) -> Result<Self> {
        positive("linear", "c", c)?;
        Ok(AgingFunction::Linear { c })
    }

    pub fn exp_minus_one(c: f64, s: f64) -> Result<Self> {
        positive("exp_minus_one", "c", c)?;
        positive("exp_minus_one", "s", s)?;
        Ok(AgingFunction::ExpMinusOne { c, s })
    }

    pub fn power(lambda: f64, k: f64) -> Result<Self> {
        positive("power", "lambda", lambda)?;
        positive("power", "k", k)?;
        Ok(AgingFunction::Power { lambda, k })
    }

    /// `R = W^{-1}(S(t))`. Without a density, `R'` uses central differences
    /// with step `max(1e-6, 1e-6 t)`.
    pub fn from_marginal(
        generator: Generator,
        survival: TimeFn,
        density: Option<TimeFn>,
    ) -> Result<Self> {
        let s0 = survival(0.0);
        if !((s0 - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidMarginal(format!(
                "survival(0) = {s0}, expected 1"
            )));
        }
        Ok(AgingFunction::FromMarginal(MarginalAging {
            generator,
            survival,
            density,
            min_step: 1e-6,
            rel_step: 1e-6,
        }))
    }

    /// Overrides the finite-difference step of a [`FromMarginal`](Self::FromMarginal)
    /// aging; other families are returned unchanged.
    pub fn with_marginal_step(self, min_step: f64, rel_step: f64) -> Self {
        match self {
            AgingFunction::FromMarginal(m) => {
                AgingFunction::FromMarginal(m.with_step(min_step, rel_step))
            }
            other => other,
        }
    }

    /// Catalog constructor from a family name and named parameters.
    pub fn make(family: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let expect: &[&str] = match family {
            "linear" => &["c"],
            "exp_minus_one" => &["c", "s"],
            "power" => &["lambda", "k"],
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        if let Some(extra) = params.keys().find(|k| !expect.contains(&k.as_str())) {
            return Err(Error::Spec(format!(
                "unknown parameter `{extra}` for aging family `{family}`"
            )));
        }
        let get = |name: &str| {
            params
                .get(name)
                .copied()
                .ok_or_else(|| Error::Spec(format!("aging family `{family}` requires `{name}`")))
        };
        match family {
            "linear" => AgingFunction::linear(get("c")?),
            "exp_minus_one" => AgingFunction::exp_minus_one(get("c")?, get("s")?),
            _ => AgingFunction::power(get("lambda")?, get("k")?),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            AgingFunction::Linear { .. } => "linear",
            AgingFunction::ExpMinusOne { .. } => "exp_minus_one",
            AgingFunction::Power { .. } => "power",
            AgingFunction::FromMarginal(_) => "from_marginal",
        }
    }

    /// Named parameters; empty for marginal-derived agings.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match *self {
            AgingFunction::Linear { c } => vec![("c", c)],
            AgingFunction::ExpMinusOne { c, s } => vec![("c", c), ("s", s)],
            AgingFunction::Power { lambda, k } => vec![("lambda", lambda), ("k", k)],
            AgingFunction::FromMarginal(_) => vec![],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// `R(t)`.
    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            AgingFunction::Linear { c } => c * t,
            AgingFunction::ExpMinusOne { c, s } => (c * t).exp_m1() / s,
            AgingFunction::Power { lambda, k } => (t / lambda).powf(*k),
            AgingFunction::FromMarginal(m) => m.value(t),
        }
    }

    /// `R'(t)`.
    pub fn deriv(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self {
            AgingFunction::Linear { c } => *c,
            AgingFunction::ExpMinusOne { c, s } => c * (c * t).exp() / s,
            AgingFunction::Power { lambda, k } => k / lambda * (t / lambda).powf(k - 1.0),
            AgingFunction::FromMarginal(m) => m.deriv(t),
        }
    }

    /// `R''(t)`; finite differences of `R'` for marginal-derived agings.
    pub fn deriv2(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self {
            AgingFunction::Linear { .. } => 0.0,
            AgingFunction::ExpMinusOne { c, s } => c * c * (c * t).exp() / s,
            AgingFunction::Power { lambda, k } => {
                k * (k - 1.0) / (lambda * lambda) * (t / lambda).powf(k - 2.0)
            }
            AgingFunction::FromMarginal(m) => {
                let h = (m.min_step * 1e2).max(m.rel_step * 1e2 * t);
                if t >= h {
                    (m.deriv(t + h) - m.deriv(t - h)) / (2.0 * h)
                } else {
                    (m.deriv(t + h) - m.deriv(t)) / h
                }
            }
        }
    }

    pub fn has_closed_form_derivatives(&self) -> bool {
        !matches!(self, AgingFunction::FromMarginal(_))
    }

    /// `R^{-1}(y)`: closed form per family, bracketed bisection otherwise.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        if y.is_infinite() {
            return Ok(f64::INFINITY);
        }
        match self {
            AgingFunction::Linear { c } => Ok(y / c),
            AgingFunction::ExpMinusOne { c, s } => Ok((s * y).ln_1p() / c),
            AgingFunction::Power { lambda, k } => Ok(lambda * y.powf(1.0 / k)),
            AgingFunction::FromMarginal(_) => self.inverse_by_bisection(y),
        }
    }

    fn inverse_by_bisection(&self, y: f64) -> Result<f64> {
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut guard = 0;
        while self.value(hi) < y {
            lo = hi;
            hi *= 2.0;
            guard += 1;
            if guard > 1100 || !hi.is_finite() {
                return Err(Error::RootFindFailure(y));
            }
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if self.value(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi {
                return Ok(0.5 * (lo + hi));
            }
        }
        Err(Error::RootFindFailure(y))
    }
}
