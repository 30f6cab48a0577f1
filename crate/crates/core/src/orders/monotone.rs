use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Increasing => Direction::Decreasing,
            Direction::Decreasing => Direction::Increasing,
        }
    }
}

/// A pair of grid points where a monotonicity claim breaks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub t0: f64,
    pub t1: f64,
    pub f0: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneResult {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

/// Checks precomputed values `f[j] = f(t[j])` for monotonicity.
///
/// Increasing means `f[j+1] >= m - slack * max(1, |m|)` where `m` is the
/// running maximum of `f[..=j]`, so slack cannot accumulate along the grid;
/// decreasing is the mirror image.
pub fn monotone_values(
    t: &[f64],
    f: &[f64],
    slack: f64,
    direction: Direction,
) -> Result<MonotoneResult> {
    if t.len() != f.len() {
        return Err(Error::InvalidGrid(format!(
            "{} points but {} values",
            t.len(),
            f.len()
        )));
    }
    if let Some(j) = f.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue(t[j]));
    }
    let mut witnesses = Vec::new();
    let mut best = 0;
    for j in 0..f.len().saturating_sub(1) {
        let better = match direction {
            Direction::Increasing => f[j] > f[best],
            Direction::Decreasing => f[j] < f[best],
        };
        if better {
            best = j;
        }
        let tol = slack * f[best].abs().max(1.0);
        let ok = match direction {
            Direction::Increasing => f[j + 1] >= f[best] - tol,
            Direction::Decreasing => f[j + 1] <= f[best] + tol,
        };
        if !ok {
            witnesses.push(Witness {
                t0: t[best],
                t1: t[j + 1],
                f0: f[best],
                f1: f[j + 1],
            });
        }
    }
    Ok(MonotoneResult {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// Evaluates `f` on `grid` and checks it with [`monotone_values`].
pub fn is_monotone(
    f: impl Fn(f64) -> f64,
    grid: &[f64],
    slack: f64,
    direction: Direction,
) -> Result<MonotoneResult> {
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    monotone_values(grid, &values, slack, direction)
}
