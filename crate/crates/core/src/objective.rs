//! Loss functions over mechanisms: the weighted `|i-j|^p` objective, its
//! tail (`L0,d`) variant, and the rescaled L0 score.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mechanism::{Mechanism, EPS_TOL};
use crate::math::powu;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregator {
    /// Weighted sum over inputs (expected loss under the prior).
    Sum,
    /// Worst input; inner sums are unweighted.
    Max,
}

/// Parameters of the loss: exponent `p`, prior `weights`, aggregator, tail
/// offset `d`, and whether to apply the `(n+1)/n` rescale.
///
/// Only cells with `|i - j| >= max(d, 1)` contribute, so `p = 0` counts wrong
/// answers and never the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    p: u32,
    weights: Vec<f64>,
    aggregator: Aggregator,
    d: usize,
    rescale: bool,
}

impl Objective {
    pub fn new(p: u32, weights: Vec<f64>, aggregator: Aggregator, d: usize, rescale: bool) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidObjective("weights must cover at least one input"));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidObjective("weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > EPS_TOL {
            return Err(Error::InvalidObjective("weights must sum to 1"));
        }
        if d > weights.len() - 1 {
            return Err(Error::InvalidObjective("tail offset d exceeds n"));
        }
        Ok(Self {
            p,
            weights,
            aggregator,
            d,
            rescale,
        })
    }

    pub fn uniform_weights(n: usize) -> Vec<f64> {
        vec![1.0 / (n + 1) as f64; n + 1]
    }

    /// Rescaled probability of a wrong answer under a uniform prior.
    pub fn l0(n: usize) -> Self {
        Self::new(0, Self::uniform_weights(n), Aggregator::Sum, 0, true).expect("uniform prior is valid")
    }

    /// Rescaled probability of an answer at least `d` steps from the truth.
    pub fn l0d(n: usize, d: usize) -> Result<Self> {
        Self::new(0, Self::uniform_weights(n), Aggregator::Sum, d, true)
    }

    /// Expected `|i-j|^p` under a uniform prior, unscaled.
    pub fn lp_norm(n: usize, p: u32) -> Self {
        Self::new(p, Self::uniform_weights(n), Aggregator::Sum, 0, false).expect("uniform prior is valid")
    }

    pub fn with_weights(self, weights: Vec<f64>) -> Result<Self> {
        Self::new(self.p, weights, self.aggregator, self.d, self.rescale)
    }

    pub fn with_aggregator(mut self, aggregator: Aggregator) -> Self {
        self.aggregator = aggregator;
        self
    }

    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn aggregator(&self) -> Aggregator {
        self.aggregator
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rescale(&self) -> bool {
        self.rescale
    }

    /// Cost attached to reporting `output` on input `input`, before weighting.
    /// Zero for cells closer than `max(d, 1)` to the diagonal.
    pub fn cell_cost(&self, output: usize, input: usize) -> f64 {
        let dist = output.abs_diff(input);
        if dist == 0 || dist < self.d {
            0.0
        } else {
            powu(dist as f64, self.p)
        }
    }
}

pub fn objective_value(m: &Mechanism, obj: &Objective) -> Result<f64> {
    if obj.n() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: obj.weights.len(),
        });
    }
    let n = m.n();
    if obj.rescale && n == 0 {
        return Err(Error::UndefinedForN0);
    }
    let column_cost = |j: usize| -> f64 { (0..=n).map(|i| m.get(i, j) * obj.cell_cost(i, j)).sum() };
    let raw = match obj.aggregator {
        Aggregator::Sum => (0..=n).map(|j| obj.weights[j] * column_cost(j)).sum(),
        Aggregator::Max => (0..=n).map(column_cost).fold(0.0, f64::max),
    };
    Ok(if obj.rescale {
        raw * (n + 1) as f64 / n as f64
    } else {
        raw
    })
}

/// Rescaled L0 score `(n+1)/n - trace/n`; 1 for a mechanism that ignores its input.
pub fn l0_score(m: &Mechanism) -> Result<f64> {
    let n = m.n();
    if n == 0 {
        return Err(Error::UndefinedForN0);
    }
    let n = n as f64;
    Ok((n + 1.0) / n - m.trace() / n)
}

/// Rescaled tail mass at distance `>= d` under a uniform prior.
pub fn l0d_score(m: &Mechanism, d: usize) -> Result<f64> {
    if m.n() == 0 {
        return Err(Error::UndefinedForN0);
    }
    objective_value(m, &Objective::l0d(m.n(), d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn uniform(n: usize) -> Mechanism {
        Mechanism::from_fn(n, |_, _| 1.0 / (n + 1) as f64).unwrap()
    }

    #[test]
    fn uniform_l0_is_one() {
        for n in 1..8 {
            let m = uniform(n);
            assert_abs_diff_eq!(l0_score(&m).unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(objective_value(&m, &Objective::l0(n)).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn identity_l0_is_zero() {
        for n in 1..6 {
            assert_eq!(l0_score(&Mechanism::identity(n)).unwrap(), 0.0);
        }
    }

    #[test]
    fn uniform_l1_by_direct_summation() {
        // |i-j| over a 3x3 grid sums to 8; each cell weighs 1/3 * 1/3
        let v = objective_value(&uniform(2), &Objective::lp_norm(2, 1)).unwrap();
        assert_abs_diff_eq!(v, 8.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn max_aggregator_takes_worst_column() {
        let m = Mechanism::new(1, alloc::vec![alloc::vec![0.9, 0.3], alloc::vec![0.1, 0.7]]).unwrap();
        let obj = Objective::lp_norm(1, 0).with_aggregator(Aggregator::Max);
        assert_abs_diff_eq!(objective_value(&m, &obj).unwrap(), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn tail_variant_drops_near_cells() {
        let m = uniform(4);
        // cells at distance >= 2: 2*(3+2+1) = 12 of 25
        let v = l0d_score(&m, 2).unwrap();
        assert_abs_diff_eq!(v, 12.0 / 25.0 * 5.0 / 4.0, epsilon = 1e-12);
        // d = 1 and d = 0 both reduce to L0
        assert_abs_diff_eq!(l0d_score(&m, 1).unwrap(), l0_score(&m).unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(l0d_score(&m, 0).unwrap(), l0_score(&m).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn n0_scores_are_undefined() {
        let m = Mechanism::identity(0);
        assert_eq!(l0_score(&m), Err(Error::UndefinedForN0));
        assert_eq!(objective_value(&m, &Objective::l0(0)), Err(Error::UndefinedForN0));
        assert_eq!(objective_value(&m, &Objective::lp_norm(0, 1)), Ok(0.0));
    }

    #[test]
    fn objective_validation() {
        assert!(Objective::new(0, alloc::vec![0.5, 0.4], Aggregator::Sum, 0, false).is_err());
        assert!(Objective::new(0, alloc::vec![1.5, -0.5], Aggregator::Sum, 0, false).is_err());
        assert!(Objective::l0d(3, 4).is_err());
        let m = uniform(2);
        assert!(matches!(
            objective_value(&m, &Objective::l0(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
