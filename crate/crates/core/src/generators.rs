//! Strict Archimedean generators `W` (the Laplace transform of the frailty).
//!
//! Every family carries hand-derived closed forms for `W`, `W'`, `W''`,
//! `ln W`, `1 - W` and `W^{-1}`. The log and complement forms are computed
//! directly rather than from `W`, so tails such as Gumbel-Barnett's
//! `W(5) ~ exp(-290)` and near-zero complements stay accurate.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01};

use crate::error::{Error, Result};
use crate::orders::monotone::{monotone_values, Direction, Witness};

/// Value below which `W` counts as having reached zero.
pub const TAIL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    /// `W(x) = exp(-x)`.
    Independence,
    /// Gamma frailty: `W(x) = b^a (b + x)^(-a)`, `a, b > 0`.
    Clayton { a: f64, b: f64 },
    /// Positive-stable frailty: `W(x) = exp(-x^(1/theta))`, `theta >= 1`.
    GumbelHougaard { theta: f64 },
    /// `W(x) = exp((1 - e^x) / theta)`, `theta in (0, 1]`.
    GumbelBarnett { theta: f64 },
    /// Ali-Mikhail-Haq: `W(x) = (1 - theta) / (e^x - theta)`, `theta in [-1, 0)`.
    AliMikhailHaq { theta: f64 },
    /// `W(x) = -ln(1 - e^-x + e^(-theta - x)) / theta`, `theta < 0`.
    Frank { theta: f64 },
}

fn check(family: &'static str, param: &'static str, value: f64, ok: bool) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            family,
            param,
            value,
        })
    }
}

impl Generator {
    pub fn independence() -> Self {
        Generator::Independence
    }

    pub fn clayton(a: f64, b: f64) -> Result<Self> {
        check("clayton", "a", a, a > 0.0)?;
        check("clayton", "b", b, b > 0.0)?;
        Ok(Generator::Clayton { a, b })
    }

    pub fn gumbel_hougaard(theta: f64) -> Result<Self> {
        check("gumbel_hougaard", "theta", theta, theta >= 1.0)?;
        Ok(Generator::GumbelHougaard { theta })
    }

    pub fn gumbel_barnett(theta: f64) -> Result<Self> {
        check(
            "gumbel_barnett",
            "theta",
            theta,
            theta > 0.0 && theta <= 1.0,
        )?;
        Ok(Generator::GumbelBarnett { theta })
    }

    pub fn amh(theta: f64) -> Result<Self> {
        check("amh", "theta", theta, (-1.0..0.0).contains(&theta))?;
        Ok(Generator::AliMikhailHaq { theta })
    }

    /// `theta = 0` is the removable singularity and maps to independence.
    pub fn frank(theta: f64) -> Result<Self> {
        check("frank", "theta", theta, theta <= 0.0)?;
        if theta == 0.0 {
            Ok(Generator::Independence)
        } else {
            Ok(Generator::Frank { theta })
        }
    }

    /// Builds a generator from a family name and named parameters.
    ///
    /// Unknown or missing parameter names are rejected.
    pub fn make(family: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let expect: &[&'static str] = match family {
            "independence" => &[],
            "clayton" => &["a", "b"],
            "gumbel_hougaard" | "gumbel_barnett" | "amh" | "frank" => &["theta"],
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        if let Some(extra) = params.keys().find(|k| !expect.contains(&k.as_str())) {
            return Err(Error::Spec(format!(
                "unknown parameter `{extra}` for generator family `{family}`"
            )));
        }
        let get = |name: &str| {
            params.get(name).copied().ok_or_else(|| {
                Error::Spec(format!("generator family `{family}` requires `{name}`"))
            })
        };
        match family {
            "independence" => Ok(Generator::Independence),
            "clayton" => Generator::clayton(get("a")?, get("b")?),
            "gumbel_hougaard" => Generator::gumbel_hougaard(get("theta")?),
            "gumbel_barnett" => Generator::gumbel_barnett(get("theta")?),
            "amh" => Generator::amh(get("theta")?),
            _ => Generator::frank(get("theta")?),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Generator::Independence => "independence",
            Generator::Clayton { .. } => "clayton",
            Generator::GumbelHougaard { .. } => "gumbel_hougaard",
            Generator::GumbelBarnett { .. } => "gumbel_barnett",
            Generator::AliMikhailHaq { .. } => "amh",
            Generator::Frank { .. } => "frank",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match *self {
            Generator::Independence => {}
            Generator::Clayton { a, b } => {
                m.insert("a".into(), a);
                m.insert("b".into(), b);
            }
            Generator::GumbelHougaard { theta }
            | Generator::GumbelBarnett { theta }
            | Generator::AliMikhailHaq { theta }
            | Generator::Frank { theta } => {
                m.insert("theta".into(), theta);
            }
        }
        m
    }

    /// `W(x)`.
    pub fn w(&self, x: f64) -> f64 {
        match *self {
            Generator::Independence => (-x).exp(),
            Generator::AliMikhailHaq { theta } if x < 1.0 => {
                1.0 / (1.0 + x.exp_m1() / (1.0 - theta))
            }
            Generator::Frank { theta } => {
                let y = frank_c(theta) * (-x).exp();
                y.ln_1p() / -theta
            }
            _ => self.ln_w(x).exp(),
        }
    }

    /// `ln W(x)`.
    pub fn ln_w(&self, x: f64) -> f64 {
        match *self {
            Generator::Independence => -x,
            Generator::Clayton { a, b } => -a * (x / b).ln_1p(),
            Generator::GumbelHougaard { theta } => -x.powf(1.0 / theta),
            Generator::GumbelBarnett { theta } => -x.exp_m1() / theta,
            Generator::AliMikhailHaq { theta } => {
                if x < 1.0 {
                    -(x.exp_m1() / (1.0 - theta)).ln_1p()
                } else {
                    (1.0 - theta).ln() - x - (-theta * (-x).exp()).ln_1p()
                }
            }
            Generator::Frank { theta } => {
                let ln_y = frank_c(theta).ln() - x;
                let ln_ln1p = if ln_y < -690.0 {
                    ln_y
                } else {
                    ln_y.exp().ln_1p().ln()
                };
                ln_ln1p - (-theta).ln()
            }
        }
    }

    /// `1 - W(x)`, accurate for small `x`.
    pub fn w_bar(&self, x: f64) -> f64 {
        match *self {
            Generator::AliMikhailHaq { theta } => {
                let q = x.exp_m1() / (1.0 - theta);
                if q.is_infinite() {
                    1.0
                } else {
                    q / (1.0 + q)
                }
            }
            Generator::Frank { theta } => {
                let c = frank_c(theta);
                // 1 - W = -ln(1 + c (e^-x - 1) / (1 + c)) / |theta|
                -(c * (-x).exp_m1() / (1.0 + c)).ln_1p() / -theta
            }
            _ => -self.ln_w(x).exp_m1(),
        }
    }

    /// `ln(-W'(x))`.
    pub fn ln_neg_dw(&self, x: f64) -> f64 {
        match *self {
            Generator::Independence => -x,
            Generator::Clayton { a, b } => (a / b).ln() - (a + 1.0) * (x / b).ln_1p(),
            Generator::GumbelHougaard { theta } => {
                let alpha = 1.0 / theta;
                if alpha == 1.0 {
                    -x
                } else {
                    alpha.ln() + (alpha - 1.0) * x.ln() - x.powf(alpha)
                }
            }
            Generator::GumbelBarnett { theta } => x - theta.ln() + self.ln_w(x),
            Generator::AliMikhailHaq { theta } => {
                (1.0 - theta).ln() - x - 2.0 * (-theta * (-x).exp()).ln_1p()
            }
            Generator::Frank { theta } => {
                let ln_y = frank_c(theta).ln() - x;
                ln_y - ln_y.exp().ln_1p() - (-theta).ln()
            }
        }
    }

    /// `W'(x) <= 0`.
    pub fn dw(&self, x: f64) -> f64 {
        -self.ln_neg_dw(x).exp()
    }

    /// `W''(x) >= 0`.
    pub fn d2w(&self, x: f64) -> f64 {
        match *self {
            Generator::Independence => (-x).exp(),
            Generator::Clayton { a, b } => {
                a * (a + 1.0) / (b * b) * (-(a + 2.0) * (x / b).ln_1p()).exp()
            }
            Generator::GumbelHougaard { theta } => {
                let alpha = 1.0 / theta;
                if alpha == 1.0 {
                    (-x).exp()
                } else {
                    // W'' = alpha x^(alpha-2) W (alpha x^alpha + 1 - alpha)
                    let xa = x.powf(alpha);
                    alpha * x.powf(alpha - 2.0) * (-xa).exp() * (alpha * xa + 1.0 - alpha)
                }
            }
            Generator::GumbelBarnett { theta } => {
                // W'' = (e^x/theta) W (e^x/theta - 1)
                let g = x.exp() / theta;
                (x - theta.ln() + self.ln_w(x)).exp() * (g - 1.0)
            }
            Generator::AliMikhailHaq { theta } => {
                // (1-theta) e^-x (1 + theta e^-x) / (1 - theta e^-x)^3
                let e = (-x).exp();
                (1.0 - theta) * e * (1.0 + theta * e) / (1.0 - theta * e).powi(3)
            }
            Generator::Frank { theta } => {
                let y = frank_c(theta) * (-x).exp();
                y / ((1.0 + y) * (1.0 + y)) / -theta
            }
        }
    }

    /// `W^{-1}(u)` for `u` in `[0, 1]`; `W^{-1}(0) = inf`.
    pub fn inverse(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return f64::INFINITY;
        }
        if u >= 1.0 {
            return 0.0;
        }
        let ln_u = u.ln();
        match *self {
            Generator::Independence => -ln_u,
            Generator::Clayton { a, b } => b * (-ln_u / a).exp_m1(),
            Generator::GumbelHougaard { theta } => (-ln_u).powf(theta),
            Generator::GumbelBarnett { theta } => (-theta * ln_u).ln_1p(),
            Generator::AliMikhailHaq { theta } => ((1.0 - theta) * (1.0 - u) / u).ln_1p(),
            Generator::Frank { theta } => {
                let m = -theta;
                ((u * m).exp() * ((1.0 - u) * m).exp_m1() / (u * m).exp_m1()).ln_1p()
            }
        }
    }

    /// Failure rate of `W` seen as a reliability function: `-W'/W`.
    pub fn hazard(&self, x: f64) -> f64 {
        match *self {
            Generator::Independence => 1.0,
            Generator::Clayton { a, b } => a / (b + x),
            Generator::GumbelHougaard { theta } => {
                let alpha = 1.0 / theta;
                alpha * x.powf(alpha - 1.0)
            }
            Generator::GumbelBarnett { theta } => x.exp() / theta,
            Generator::AliMikhailHaq { theta } => 1.0 / (1.0 - theta * (-x).exp()),
            Generator::Frank { theta } => {
                let y = frank_c(theta) * (-x).exp();
                if y < 1e-300 {
                    // ln(1+y) ~ y
                    1.0
                } else {
                    (y / (1.0 + y)) / y.ln_1p()
                }
            }
        }
    }

    /// `-W''/W'`; increasing iff `-W'` is log-concave.
    pub fn lr_rate(&self, x: f64) -> f64 {
        match *self {
            Generator::Independence => 1.0,
            Generator::Clayton { a, b } => (a + 1.0) / (b + x),
            Generator::GumbelHougaard { theta } => {
                let alpha = 1.0 / theta;
                if alpha == 1.0 {
                    1.0
                } else {
                    (alpha * x.powf(alpha) + 1.0 - alpha) / x
                }
            }
            Generator::GumbelBarnett { theta } => x.exp() / theta - 1.0,
            Generator::AliMikhailHaq { theta } => {
                let e = (-x).exp();
                (1.0 + theta * e) / (1.0 - theta * e)
            }
            Generator::Frank { theta } => 1.0 / (1.0 + frank_c(theta) * (-x).exp()),
        }
    }

    /// `-W'/(1 - W)`; decreasing iff `1 - W` is log-concave.
    pub fn reversed_rate(&self, x: f64) -> f64 {
        (self.ln_neg_dw(x) - self.w_bar(x).ln()).exp()
    }

    /// Archimedean copula `W(W^{-1}(u_1) + ... + W^{-1}(u_n))`.
    pub fn copula(&self, u: &[f64]) -> Result<f64> {
        if let Some(bad) = u.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::DomainError(format!(
                "copula argument {bad} is outside [0, 1]"
            )));
        }
        if u.contains(&0.0) {
            return Ok(0.0);
        }
        let s: f64 = u.iter().map(|&v| self.inverse(v)).sum();
        Ok(self.w(s))
    }

    /// Abscissa where `W` falls to [`TAIL_FLOOR`].
    pub fn tail_point(&self) -> f64 {
        self.inverse(TAIL_FLOOR)
    }

    /// Log-spaced plus linear probe grid on `(0, tail_point]`.
    pub fn probe_grid(&self, points: usize) -> Vec<f64> {
        let x_max = self.tail_point();
        let x_lo = (x_max * 1e-6).min(1e-3);
        let half = (points / 2).max(8);
        let mut xs: Vec<f64> = (0..half)
            .map(|i| {
                let f = i as f64 / (half - 1) as f64;
                (x_lo.ln() + f * (x_max.ln() - x_lo.ln())).exp()
            })
            .collect();
        let lin_max = x_max.min(10.0);
        xs.extend((1..=half).map(|i| lin_max * i as f64 / half as f64));
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        xs
    }

    /// Largest dimension for which `W(x_1 + ... + x_d)` is guaranteed to be
    /// a joint survival function; `None` when `W` is completely monotone
    /// (a Laplace transform) and every dimension works.
    ///
    /// In the admissible ranges, `amh`, `frank` and `gumbel_barnett` are
    /// only guaranteed 2-monotone. Series lifetimes `W(sum R_i(t))` are
    /// proper in any dimension.
    pub fn max_dimension(&self) -> Option<usize> {
        match self {
            Generator::Independence
            | Generator::Clayton { .. }
            | Generator::GumbelHougaard { .. } => None,
            _ => Some(2),
        }
    }

    /// Closed-form frailty law whose Laplace transform is `W`, when known.
    pub fn frailty_sampler(&self) -> Option<FrailtySampler> {
        match *self {
            Generator::Independence => Some(FrailtySampler::Degenerate),
            Generator::Clayton { a, b } => Some(FrailtySampler::Gamma {
                shape: a,
                rate: b,
                dist: Gamma::new(a, 1.0 / b).ok()?,
            }),
            Generator::GumbelHougaard { theta: 1.0 } => Some(FrailtySampler::Degenerate),
            Generator::GumbelHougaard { theta } => {
                Some(FrailtySampler::PositiveStable { index: 1.0 / theta })
            }
            _ => None,
        }
    }

    /// Grid-based aging classification of `W` as a reliability function.
    pub fn classify(&self, grid: &[f64], slack: f64) -> Result<AgingClassReport> {
        if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(
                "probe grid must be strictly increasing".into(),
            ));
        }
        let hazard: Vec<f64> = grid.iter().map(|&x| self.hazard(x)).collect();
        let lr: Vec<f64> = grid.iter().map(|&x| self.lr_rate(x)).collect();
        // The reversed rate is undefined at x = 0 (1 - W vanishes).
        let rev_grid: Vec<f64> = grid.iter().copied().filter(|&x| x > 0.0).collect();
        let rev: Vec<f64> = rev_grid.iter().map(|&x| self.reversed_rate(x)).collect();

        let ifr = monotone_values(grid, &hazard, slack, Direction::Increasing)?;
        let dfr = monotone_values(grid, &hazard, slack, Direction::Decreasing)?;
        let ilr = monotone_values(grid, &lr, slack, Direction::Increasing)?;
        let drfr = monotone_values(&rev_grid, &rev, slack, Direction::Decreasing)?;

        let mut witnesses = BTreeMap::new();
        witnesses.insert("ifr".to_string(), ifr.witnesses.clone());
        witnesses.insert("dfr".to_string(), dfr.witnesses.clone());
        witnesses.insert("ilr".to_string(), ilr.witnesses.clone());
        witnesses.insert("drfr".to_string(), drfr.witnesses.clone());
        Ok(AgingClassReport {
            ifr: ifr.holds,
            dfr: dfr.holds,
            ilr: ilr.holds,
            drfr: drfr.holds,
            probe_grid: grid.to_vec(),
            witnesses,
        })
    }

    /// [`classify`](Self::classify) on the default 512-point probe grid.
    pub fn classify_default(&self) -> Result<AgingClassReport> {
        self.classify(&self.probe_grid(512), crate::orders::DEFAULT_SLACK)
    }
}

fn frank_c(theta: f64) -> f64 {
    // e^{-theta} - 1 > 0 for theta < 0
    (-theta).exp_m1()
}

/// Aging classes of `W` over one probe grid.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AgingClassReport {
    /// `W` log-concave (`-W'/W` increasing).
    pub ifr: bool,
    /// `W` log-convex (`-W'/W` decreasing).
    pub dfr: bool,
    /// `-W'` log-concave.
    pub ilr: bool,
    /// `1 - W` log-concave.
    pub drfr: bool,
    #[serde(skip)]
    pub probe_grid: Vec<f64>,
    pub witnesses: BTreeMap<String, Vec<Witness>>,
}

/// Sampler for the frailty `Theta` with `E[exp(-Theta x)] = W(x)`.
#[derive(Debug, Clone, Copy)]
pub enum FrailtySampler {
    /// `Theta = 1` almost surely.
    Degenerate,
    /// `Theta ~ Gamma(shape, rate)`.
    Gamma {
        shape: f64,
        rate: f64,
        dist: Gamma<f64>,
    },
    /// One-sided stable law with `E[exp(-Theta x)] = exp(-x^index)`.
    PositiveStable { index: f64 },
}

impl FrailtySampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            FrailtySampler::Degenerate => 1.0,
            FrailtySampler::Gamma { dist, .. } => dist.sample(rng),
            FrailtySampler::PositiveStable { index } => {
                // Kanter's representation.
                let u: f64 = PI * rng.sample::<f64, _>(Open01);
                let e: f64 = rng.sample(Exp1);
                let a = index;
                let left = (a * u).sin() / u.sin().powf(1.0 / a);
                let right = (((1.0 - a) * u).sin() / e).powf((1.0 - a) / a);
                left * right
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn matrix() -> Vec<Generator> {
        vec![
            Generator::independence(),
            Generator::clayton(1.0, 1.0).unwrap(),
            Generator::clayton(2.0, 3.0).unwrap(),
            Generator::clayton(1.0 / 3.0, 1.0 / 3.0).unwrap(),
            Generator::gumbel_hougaard(1.0).unwrap(),
            Generator::gumbel_hougaard(2.0).unwrap(),
            Generator::gumbel_barnett(0.5).unwrap(),
            Generator::gumbel_barnett(1.0).unwrap(),
            Generator::amh(-1.0).unwrap(),
            Generator::amh(-0.3).unwrap(),
            Generator::frank(-1.0).unwrap(),
            Generator::frank(-5.0).unwrap(),
        ]
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn clayton_value() {
        let g = Generator::clayton(1.0, 1.0).unwrap();
        assert!((g.w(2.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((g.copula(&[0.5, 0.5]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn independence_value() {
        let g = Generator::independence();
        assert_eq!(g.w(0.0), 1.0);
        assert!((g.w(1.3) - (-1.3f64).exp()).abs() < 1e-16);
        assert!((g.copula(&[0.5, 0.5]).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gumbel_barnett_closed_form() {
        let g = Generator::gumbel_barnett(0.5).unwrap();
        for x in [0.0, 0.1, 0.5, 1.0, 2.0] {
            let expected = (2.0 * (1.0 - f64::exp(x))).exp();
            assert!(rel_close(g.w(x), expected, 1e-13), "x={x}");
        }
        // Far past underflow the log stays finite.
        assert!((g.ln_w(5.0) + 2.0 * 5f64.exp_m1()).abs() < 1e-9);
        assert!(g.ln_w(5.0) < -290.0);
    }

    #[test]
    fn w_at_zero_is_one() {
        for g in matrix() {
            assert_eq!(g.w(0.0), 1.0, "{g:?}");
            assert_eq!(g.w_bar(0.0), 0.0, "{g:?}");
        }
    }

    #[test]
    fn decreasing_convex_vanishing() {
        for g in matrix() {
            let xs = g.probe_grid(256);
            let ws: Vec<f64> = xs.iter().map(|&x| g.w(x)).collect();
            for w in ws.windows(2) {
                assert!(w[1] < w[0] || w[1] == 0.0, "{g:?} not decreasing");
            }
            for &x in &xs {
                assert!(g.dw(x) <= 0.0, "{g:?} W' > 0 at {x}");
                assert!(g.d2w(x) >= 0.0, "{g:?} W'' < 0 at {x}");
            }
            assert!(g.w(g.tail_point()) < 1e-12 * (1.0 + 1e-6), "{g:?}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for g in matrix() {
            for x in [0.05, 0.2, 0.7, 1.5, 3.0] {
                if g.w(x) < 1e-200 {
                    continue;
                }
                let h = 1e-5 * x.max(1e-2);
                let fd1 = (g.w(x + h) - g.w(x - h)) / (2.0 * h);
                assert!(
                    rel_close(g.dw(x), fd1, 1e-6),
                    "{g:?} W'({x}) = {} vs {fd1}",
                    g.dw(x)
                );
                let fd2 = (g.dw(x + h) - g.dw(x - h)) / (2.0 * h);
                assert!(
                    rel_close(g.d2w(x), fd2, 1e-6) || (g.d2w(x) - fd2).abs() < 1e-9,
                    "{g:?} W''({x}) = {} vs {fd2}",
                    g.d2w(x)
                );
            }
        }
    }

    #[test]
    fn log_and_complement_forms_agree() {
        for g in matrix() {
            for x in [1e-6, 1e-3, 0.3, 1.0, 2.5] {
                let w = g.w(x);
                assert!(rel_close(g.ln_w(x).exp(), w, 1e-12), "{g:?} ln_w {x}");
                assert!(rel_close(g.w_bar(x) + w, 1.0, 1e-14), "{g:?} w_bar {x}");
                assert!(rel_close(-g.ln_neg_dw(x).exp(), g.dw(x), 1e-14));
                let hz = -g.dw(x) / w;
                assert!(rel_close(g.hazard(x), hz, 1e-10), "{g:?} hazard {x}");
                let lr = -g.d2w(x) / g.dw(x);
                assert!(rel_close(g.lr_rate(x), lr, 1e-10), "{g:?} lr {x}");
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        for g in matrix() {
            for u in [1.0, 0.999_999, 0.9, 0.5, 0.1, 1e-3, 1e-9] {
                let x = g.inverse(u);
                assert!(rel_close(g.w(x), u, 1e-10), "{g:?} u={u} got {}", g.w(x));
            }
        }
    }

    #[test]
    fn copula_margin_axiom() {
        for g in matrix() {
            for i in 1..=9 {
                let u = i as f64 / 10.0;
                let k = g.copula(&[u, 1.0, 1.0]).unwrap();
                assert!((k - u).abs() < 1e-10, "{g:?}");
            }
            assert_eq!(g.copula(&[0.0, 0.4]).unwrap(), 0.0);
        }
        assert!(matches!(
            Generator::independence().copula(&[1.2]),
            Err(Error::DomainError(_))
        ));
        assert!(Generator::independence().copula(&[f64::NAN]).is_err());
    }

    #[test]
    fn parameter_ranges() {
        assert!(matches!(
            Generator::clayton(0.0, 1.0),
            Err(Error::ParamOutOfRange { param: "a", .. })
        ));
        assert!(Generator::clayton(1.0, -1.0).is_err());
        assert!(Generator::gumbel_hougaard(0.9).is_err());
        assert!(Generator::gumbel_barnett(0.0).is_err());
        assert!(Generator::gumbel_barnett(1.1).is_err());
        assert!(Generator::amh(0.0).is_err());
        assert!(Generator::amh(-1.1).is_err());
        assert!(Generator::frank(0.5).is_err());
        assert_eq!(Generator::frank(0.0).unwrap(), Generator::Independence);

        let mut p = BTreeMap::new();
        p.insert("theta".to_string(), 0.5);
        assert_eq!(
            Generator::make("gumbel_barnett", &p).unwrap(),
            Generator::GumbelBarnett { theta: 0.5 }
        );
        assert!(Generator::make("clayton", &p).is_err());
        assert!(matches!(
            Generator::make("joe", &p),
            Err(Error::UnknownFamily(_))
        ));
        for g in matrix() {
            if let Generator::GumbelHougaard { theta } = g {
                if theta == 1.0 {
                    continue;
                }
            }
            assert_eq!(Generator::make(g.family(), &g.params()).unwrap(), g);
        }
    }

    #[test]
    fn classification() {
        let ind = Generator::independence().classify_default().unwrap();
        assert!(ind.ifr && ind.dfr);

        let cl = Generator::clayton(1.0, 1.0)
            .unwrap()
            .classify_default()
            .unwrap();
        assert!(cl.dfr && !cl.ifr);
        assert!(!cl.witnesses["ifr"].is_empty());

        let cl2 = Generator::clayton(2.0, 3.0)
            .unwrap()
            .classify_default()
            .unwrap();
        assert!(cl2.dfr && !cl2.ifr);

        let gb = Generator::gumbel_barnett(0.5)
            .unwrap()
            .classify_default()
            .unwrap();
        assert!(gb.ifr && !gb.dfr);

        for g in matrix() {
            let rep = g.classify_default().unwrap();
            if rep.ilr {
                assert!(rep.ifr && rep.drfr, "{g:?}: ILR without IFR/DRFR");
            }
        }
    }

    #[test]
    fn log_concave_families_are_ifr() {
        for g in [
            Generator::amh(-0.5).unwrap(),
            Generator::frank(-2.0).unwrap(),
            Generator::gumbel_barnett(1.0).unwrap(),
        ] {
            assert!(g.classify_default().unwrap().ifr, "{g:?}");
        }
    }

    fn laplace_check(g: Generator, seed: u64) {
        let sampler = g.frailty_sampler().expect("sampler");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let thetas: Vec<f64> = (0..100_000).map(|_| sampler.sample(&mut rng)).collect();
        for x in [0.5, 1.0, 2.0] {
            let v: Vec<f64> = thetas.iter().map(|t| (-t * x).exp()).collect();
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            let var = v.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let se = (var / n).sqrt();
            let diff = (mean - g.w(x)).abs();
            assert!(diff <= 4.0 * se + 1e-10, "{g:?} x={x} diff={diff} se={se}");
        }
    }

    #[test]
    fn frailty_laplace_transform() {
        laplace_check(Generator::clayton(2.0, 3.0).unwrap(), 1);
        laplace_check(Generator::clayton(1.0, 1.0).unwrap(), 2);
        laplace_check(Generator::independence(), 3);
        laplace_check(Generator::gumbel_hougaard(2.0).unwrap(), 4);
        laplace_check(Generator::gumbel_hougaard(1.5).unwrap(), 5);
    }

    #[test]
    fn unsupported_frailty() {
        assert!(Generator::frank(-1.0).unwrap().frailty_sampler().is_none());
        assert!(Generator::amh(-0.5).unwrap().frailty_sampler().is_none());
        assert!(Generator::gumbel_barnett(0.5)
            .unwrap()
            .frailty_sampler()
            .is_none());
        assert!(matches!(
            Generator::independence().frailty_sampler(),
            Some(FrailtySampler::Degenerate)
        ));
        match Generator::clayton(2.0, 3.0).unwrap().frailty_sampler() {
            Some(FrailtySampler::Gamma { shape, rate, .. }) => {
                assert_eq!((shape, rate), (2.0, 3.0));
            }
            other => panic!("{other:?}"),
        }
    }
}
