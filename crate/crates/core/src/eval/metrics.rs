use alloc::vec::Vec;

use super::data::GroupCounts;
use super::rng::rep_rng;
use super::sampling::ColumnSampler;
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::mechanism::Mechanism;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Fraction of groups whose output is more than `d` away from the truth.
    L0dError,
    Rmse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub reps: usize,
    pub seed: u64,
    pub d: usize,
    pub metric: Metric,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            reps: 30,
            seed: 0,
            d: 0,
            metric: Metric::L0dError,
        }
    }
}

impl EvalConfig {
    pub fn new(reps: usize, seed: u64, d: usize, metric: Metric) -> Result<Self> {
        if reps == 0 {
            return Err(Error::NoRepetitions);
        }
        Ok(Self { reps, seed, d, metric })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub mean: f64,
    /// Sample standard deviation over repetitions divided by `sqrt(reps)`;
    /// zero for a single repetition.
    pub std_error: f64,
    pub per_rep: Vec<f64>,
}

impl EvalResult {
    pub fn from_reps(per_rep: Vec<f64>) -> Self {
        let k = per_rep.len() as f64;
        let mean = per_rep.iter().sum::<f64>() / k;
        let std_error = if per_rep.len() > 1 {
            let var = per_rep.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
            sqrt(var / k)
        } else {
            0.0
        };
        Self { mean, std_error, per_rep }
    }
}

/// Runs `cfg.reps` repetitions; each draws one output per group from its own
/// stream and reduces the (true, reported) pairs with `score`.
fn run(m: &Mechanism, g: &GroupCounts, cfg: &EvalConfig, score: impl Fn(&[(usize, usize)]) -> f64) -> Result<EvalResult> {
    if cfg.reps == 0 {
        return Err(Error::NoRepetitions);
    }
    if m.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: g.n() + 1,
        });
    }
    let sampler = ColumnSampler::new(m);
    let mut pairs = Vec::with_capacity(g.len());
    let mut per_rep = Vec::with_capacity(cfg.reps);
    for rep in 0..cfg.reps {
        let mut rng = rep_rng(cfg.seed, rep as u64);
        pairs.clear();
        for &truth in g.counts() {
            pairs.push((truth, sampler.sample(truth, &mut rng)?));
        }
        per_rep.push(score(&pairs));
    }
    Ok(EvalResult::from_reps(per_rep))
}

pub fn empirical_l0d(m: &Mechanism, g: &GroupCounts, cfg: &EvalConfig) -> Result<EvalResult> {
    let d = cfg.d;
    run(m, g, cfg, |pairs| {
        let far = pairs.iter().filter(|&&(t, o)| t.abs_diff(o) > d).count();
        far as f64 / pairs.len() as f64
    })
}

pub fn empirical_rmse(m: &Mechanism, g: &GroupCounts, cfg: &EvalConfig) -> Result<EvalResult> {
    run(m, g, cfg, |pairs| {
        let sq: f64 = pairs
            .iter()
            .map(|&(t, o)| {
                let e = t.abs_diff(o) as f64;
                e * e
            })
            .sum();
        sqrt(sq / pairs.len() as f64)
    })
}

/// Dispatches on `cfg.metric`.
pub fn evaluate(m: &Mechanism, g: &GroupCounts, cfg: &EvalConfig) -> Result<EvalResult> {
    match cfg.metric {
        Metric::L0dError => empirical_l0d(m, g, cfg),
        Metric::Rmse => empirical_rmse(m, g, cfg),
    }
}
