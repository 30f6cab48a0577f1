//! Monte Carlo oracle built on the frailty representation of TTE models.
//!
//! Given `Theta = theta`, components are independent with
//! `P(X_i > x | theta) = exp(-theta R_i(x))`, so `X_i = R_i^{-1}(E_i / theta)`
//! with `E_i` standard exponential.
//!
//! Randomness comes from ChaCha8. Samples are drawn in fixed shards of
//! [`SHARD_SIZE`]; shard `s` uses the stream `s` of the generator seeded
//! with the user seed, so results depend only on `(seed, model, n_samples)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::residual::ResidualKind;
use crate::structure::{path_family_lifetime, ComponentSet, Structure};
use crate::tte::{Lifetime, Target, TteModel};

pub const SHARD_SIZE: usize = 4096;
pub const MIN_CONDITIONING: usize = 1000;
pub const DEFAULT_TIMES: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
pub const Z_THRESHOLD: f64 = 4.0;

/// Component lifetimes drawn from one model.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    n_samples: usize,
    n: usize,
    seed: u64,
    lifetimes: Vec<f64>,
    theta: Vec<f64>,
}

impl SampleBatch {
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    /// Number of components per sample.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Component lifetimes of sample `j`.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.lifetimes[j * self.n..(j + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.lifetimes.chunks_exact(self.n)
    }

    pub fn theta_draws(&self) -> &[f64] {
        &self.theta
    }
}

/// Draws `n_samples` component lifetime vectors from `model`.
pub fn sample(model: &TteModel, n_samples: usize, seed: u64) -> Result<SampleBatch> {
    let g = model.generator();
    let sampler = g
        .frailty_sampler()
        .ok_or_else(|| Error::UnsupportedFrailty(g.family().to_string()))?;
    let n = model.n();
    let aging = model.aging();
    let mut lifetimes = Vec::with_capacity(n_samples * n);
    let mut theta = Vec::with_capacity(n_samples);
    let shards = n_samples.div_ceil(SHARD_SIZE);
    for s in 0..shards {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s as u64);
        let count = SHARD_SIZE.min(n_samples - s * SHARD_SIZE);
        for _ in 0..count {
            let th = sampler.sample(&mut rng);
            theta.push(th);
            for r in aging {
                let e: f64 = rng.sample(Exp1);
                let x = if th > 0.0 {
                    r.inverse(e / th)?
                } else {
                    f64::INFINITY
                };
                lifetimes.push(x);
            }
        }
    }
    Ok(SampleBatch {
        n_samples,
        n,
        seed,
        lifetimes,
        theta,
    })
}

/// A proportion estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub std_error: f64,
    /// Number of samples the proportion is taken over.
    pub count: usize,
}

impl Estimate {
    fn from_counts(hits: usize, count: usize) -> Self {
        let p = hits as f64 / count as f64;
        Estimate {
            estimate: p,
            std_error: (p * (1.0 - p) / count as f64).sqrt(),
            count,
        }
    }

    /// Standardized error against `truth`, using the binomial standard error
    /// under `truth` (not the empirical one, which vanishes when no sample
    /// hits).
    pub fn z_score(&self, truth: f64) -> f64 {
        let se = (truth * (1.0 - truth) / self.count as f64).sqrt();
        let d = self.estimate - truth;
        if se > 0.0 {
            d / se
        } else if d == 0.0 {
            0.0
        } else {
            d.signum() * f64::INFINITY
        }
    }
}

fn check_dim(batch: &SampleBatch, n: usize) -> Result<()> {
    if batch.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: batch.n,
        });
    }
    Ok(())
}

/// Fraction of samples whose path-family lifetime exceeds `t`.
pub fn empirical_survival_paths(
    batch: &SampleBatch,
    path_sets: &[ComponentSet],
    t: f64,
) -> Estimate {
    let hits = batch
        .rows()
        .filter(|x| path_family_lifetime(path_sets, x) > t)
        .count();
    Estimate::from_counts(hits, batch.n_samples)
}

/// `P(T > t)` estimated from `batch` for the system `structure`.
pub fn empirical_survival(batch: &SampleBatch, structure: &Structure, t: f64) -> Result<Estimate> {
    check_dim(batch, structure.n())?;
    Ok(empirical_survival_paths(batch, structure.path_sets(), t))
}

/// `P(T > t + x | T > t)` or `P(T > t + x | X_{1:n} > t)` from `batch`.
pub fn empirical_residual_paths(
    batch: &SampleBatch,
    path_sets: &[ComponentSet],
    t: f64,
    x: f64,
    kind: ResidualKind,
) -> Result<Estimate> {
    let mut survivors = 0usize;
    let mut hits = 0usize;
    for row in batch.rows() {
        let life = path_family_lifetime(path_sets, row);
        let cond = match kind {
            ResidualKind::Usual => life > t,
            ResidualKind::SystemLevel => row.iter().all(|&v| v > t),
        };
        if cond {
            survivors += 1;
            if life > t + x {
                hits += 1;
            }
        }
    }
    if survivors < MIN_CONDITIONING {
        return Err(Error::InsufficientConditioning {
            survivors,
            required: MIN_CONDITIONING,
        });
    }
    Ok(Estimate::from_counts(hits, survivors))
}

pub fn empirical_residual(
    batch: &SampleBatch,
    structure: &Structure,
    t: f64,
    x: f64,
    kind: ResidualKind,
) -> Result<Estimate> {
    check_dim(batch, structure.n())?;
    empirical_residual_paths(batch, structure.path_sets(), t, x, kind)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationPoint {
    pub t: f64,
    pub analytic: f64,
    pub empirical: f64,
    pub std_error: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub target: String,
    pub samples: usize,
    pub seed: u64,
    pub threshold: f64,
    pub points: Vec<ValidationPoint>,
    pub all_within: bool,
}

/// Compares the analytic survival of `target` with the oracle at `times`.
pub fn validate(
    model: &TteModel,
    target: &Target,
    times: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<ValidationReport> {
    let batch = sample(model, n_samples, seed)?;
    validate_batch(model, target, times, &batch)
}

/// [`validate`] against an existing batch.
pub fn validate_batch(
    model: &TteModel,
    target: &Target,
    times: &[f64],
    batch: &SampleBatch,
) -> Result<ValidationReport> {
    check_dim(batch, model.n())?;
    let lifetime = model.lifetime(target)?;
    let paths = model.target_path_sets(target)?;
    let points: Vec<ValidationPoint> = times
        .iter()
        .map(|&t| {
            let analytic = lifetime.survival(t);
            let e = empirical_survival_paths(batch, &paths, t);
            ValidationPoint {
                t,
                analytic,
                empirical: e.estimate,
                std_error: e.std_error,
                z: e.z_score(analytic),
            }
        })
        .collect();
    let all_within = points.iter().all(|p| p.z.abs() <= Z_THRESHOLD);
    Ok(ValidationReport {
        target: target.to_string(),
        samples: batch.n_samples,
        seed: batch.seed,
        threshold: Z_THRESHOLD,
        points,
        all_within,
    })
}
