//! Curve data for the reference figures, with their parameterizations
//! fixed in code.
//!
//! | name         | content                                                     |
//! |--------------|-------------------------------------------------------------|
//! | `fig1_left`  | hazards of `X_{1:2}`, `X_1`, `X_2`; `W(x) = 1/(1+x)`        |
//! | `fig1_right` | same agings; `W(x) = exp(2(1 - e^x))` (Gumbel-Barnett 0.5)  |
//! | `fig2`       | hazards of `X_{1:2}`, `X_{2:2}`; `W(x) = (1+3x)^(-1/3)`     |
//! | `fig3`       | `phi_1`, `phi_2`, `phi_2/phi_1` of the aircraft system      |
//! | `fig4`       | residual reliabilities `F_{P,1}`, `F*_{P,1}` and their ratio |

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::residual::{residual_series, ResidualKind};
use crate::structure::{BuiltinStructure, Structure};
use crate::tte::{AgingFunction, Lifetime, PhiFunction, TteModel, HAZARD_UNDERFLOW};

/// Survival floor below which hazard curves are not drawn.
pub const HAZARD_CLIP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureName {
    Fig1Left,
    Fig1Right,
    Fig2,
    Fig3,
    Fig4,
}

impl FigureName {
    pub const ALL: [FigureName; 5] = [
        FigureName::Fig1Left,
        FigureName::Fig1Right,
        FigureName::Fig2,
        FigureName::Fig3,
        FigureName::Fig4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureName::Fig1Left => "fig1_left",
            FigureName::Fig1Right => "fig1_right",
            FigureName::Fig2 => "fig2",
            FigureName::Fig3 => "fig3",
            FigureName::Fig4 => "fig4",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            FigureName::Fig1Left => {
                "hazard rates of X_{1:2}, X_1, X_2 on (0,1.5]; W(x)=(1+x)^-1, R_1(t)=e^{2t}-1, R_2(t)=e^t-1"
            }
            FigureName::Fig1Right => {
                "hazard rates of X_{1:2}, X_1, X_2 on (0,1.5]; W(x)=exp((1-e^x)/0.5), R_1(t)=e^{2t}-1, R_2(t)=e^t-1"
            }
            FigureName::Fig2 => {
                "hazard rates of X_{1:2}, X_{2:2} on (0,5]; W(x)=(1+3x)^(-1/3), R_1(t)=(e^t-1)/10, R_2(t)=t"
            }
            FigureName::Fig3 => {
                "phi_1, phi_2 and phi_2/phi_1 on (0,10] for the aircraft system, phi(x)=4W(2x)-4W(3x)+W(4x), W_1(x)=1/(1+x), W_2(x)=3/(3+x)"
            }
            FigureName::Fig4 => {
                "residual reliabilities F_{P,1}, F*_{P,1} and F*/F on (0,1.5]; W(x)=exp((1-e^x)/0.5), R_1=(e^x-1)/10, R_2=(e^x-1)/5, R_3=x, P={1,2}, t=1"
            }
        }
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureName::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Spec(format!("unknown figure `{s}`")))
    }
}

/// One CSV worth of data.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Curve {
    fn xy(name: &str, x: &str, points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Curve {
            name: name.to_string(),
            columns: vec![x.to_string(), "value".to_string()],
            rows: points.into_iter().map(|(a, b)| vec![a, b]).collect(),
        }
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

fn linspace(hi: f64, points: usize) -> Vec<f64> {
    (1..=points)
        .map(|i| hi * i as f64 / points as f64)
        .collect()
}

fn hazard_curve(name: &str, l: &dyn Lifetime, t: &[f64]) -> Curve {
    let floor = HAZARD_CLIP.ln().max(HAZARD_UNDERFLOW.ln());
    Curve::xy(
        name,
        "t",
        t.iter()
            .copied()
            .filter(|&x| l.log_survival(x) >= floor)
            .map(|x| (x, l.hazard(x))),
    )
}

/// Two components, `R_1(t) = e^{2t} - 1`, `R_2(t) = e^t - 1`.
pub fn fig1_model(generator: Generator) -> Result<TteModel> {
    TteModel::new(
        generator,
        vec![
            AgingFunction::exp_minus_one(2.0, 1.0)?,
            AgingFunction::exp_minus_one(1.0, 1.0)?,
        ],
        Structure::builtin(BuiltinStructure::Parallel, 2)?,
    )
}

/// `W(x) = (1 + 3x)^(-1/3)`, `R_1(t) = (e^t - 1)/10`, `R_2(t) = t`.
pub fn fig2_model() -> Result<TteModel> {
    TteModel::new(
        Generator::clayton(1.0 / 3.0, 1.0 / 3.0)?,
        vec![
            AgingFunction::exp_minus_one(1.0, 10.0)?,
            AgingFunction::linear(1.0)?,
        ],
        Structure::builtin(BuiltinStructure::Parallel, 2)?,
    )
}

/// Aircraft systems with `W_1(x) = 1/(1+x)` and `W_2(x) = 3/(3+x)` and a
/// common `R(t) = t`.
pub fn aircraft_pair() -> Result<(TteModel, TteModel)> {
    let s = Structure::builtin(BuiltinStructure::Aircraft4, 4)?;
    let r = AgingFunction::linear(1.0)?;
    Ok((
        TteModel::identical(Generator::clayton(1.0, 1.0)?, r.clone(), s.clone()),
        TteModel::identical(Generator::clayton(1.0, 3.0)?, r, s),
    ))
}

/// Three components under Gumbel-Barnett 0.5 with
/// `R_1 = (e^x - 1)/10`, `R_2 = (e^x - 1)/5`, `R_3 = x`.
pub fn residual_example_model() -> Result<TteModel> {
    TteModel::new(
        Generator::gumbel_barnett(0.5)?,
        vec![
            AgingFunction::exp_minus_one(1.0, 10.0)?,
            AgingFunction::exp_minus_one(1.0, 5.0)?,
            AgingFunction::linear(1.0)?,
        ],
        Structure::builtin(BuiltinStructure::Series, 3)?,
    )
}

pub const RESIDUAL_EXAMPLE_SET: [usize; 2] = [1, 2];
pub const RESIDUAL_EXAMPLE_T: f64 = 1.0;

fn fig1(generator: Generator, tag: &str) -> Result<Vec<Curve>> {
    let m = fig1_model(generator)?;
    let t = linspace(1.5, 512);
    Ok(vec![
        hazard_curve(&format!("{tag}_series"), &m.series(&[1, 2])?, &t),
        hazard_curve(&format!("{tag}_x1"), &m.marginal(1)?, &t),
        hazard_curve(&format!("{tag}_x2"), &m.marginal(2)?, &t),
    ])
}

/// Curves of figure `name`.
pub fn figure(name: FigureName) -> Result<Vec<Curve>> {
    match name {
        FigureName::Fig1Left => fig1(Generator::clayton(1.0, 1.0)?, "fig1_left"),
        FigureName::Fig1Right => fig1(Generator::gumbel_barnett(0.5)?, "fig1_right"),
        FigureName::Fig2 => {
            let m = fig2_model()?;
            let t = linspace(5.0, 1024);
            Ok(vec![
                hazard_curve("fig2_series", &m.series(&[1, 2])?, &t),
                hazard_curve("fig2_parallel", &m.parallel(&[])?, &t),
            ])
        }
        FigureName::Fig3 => {
            let (m1, m2) = aircraft_pair()?;
            let (p1, p2): (PhiFunction, PhiFunction) = (m1.id_phi()?, m2.id_phi()?);
            let rows = linspace(10.0, 1024)
                .into_iter()
                .map(|x| {
                    let (a, b) = (p1.value(x), p2.value(x));
                    vec![x, a, b, (p2.ln_value(x) - p1.ln_value(x)).exp()]
                })
                .collect();
            Ok(vec![Curve {
                name: "fig3".into(),
                columns: ["x", "phi1", "phi2", "ratio"].map(String::from).to_vec(),
                rows,
            }])
        }
        FigureName::Fig4 => {
            let m = residual_example_model()?;
            let (p, t) = (&RESIDUAL_EXAMPLE_SET, RESIDUAL_EXAMPLE_T);
            let usual = residual_series(&m, p, t, ResidualKind::Usual)?;
            let star = residual_series(&m, p, t, ResidualKind::SystemLevel)?;
            let x = linspace(1.5, 512);
            Ok(vec![
                Curve::xy("fig4_usual", "x", x.iter().map(|&x| (x, usual.survival(x)))),
                Curve::xy(
                    "fig4_system_level",
                    "x",
                    x.iter().map(|&x| (x, star.survival(x))),
                ),
                Curve::xy(
                    "fig4_ratio",
                    "x",
                    x.iter()
                        .map(|&x| (x, (star.log_survival(x) - usual.log_survival(x)).exp())),
                ),
            ])
        }
    }
}

/// Writes each curve of `name` to `<dir>/<curve>.csv`.
pub fn write_figure(name: FigureName, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for c in figure(name)? {
        let path = dir.join(format!("{}.csv", c.name));
        let file = std::fs::File::create(&path)?;
        let cols: Vec<&str> = c.columns.iter().map(String::as_str).collect();
        crate::cli::write_csv(file, &cols, &c.rows)?;
        written.push(path);
    }
    Ok(written)
}
