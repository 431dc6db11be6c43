use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::mechanism::Mechanism;

/// Inverse-CDF sampler with the cumulative sums of every column precomputed.
#[derive(Debug, Clone)]
pub struct ColumnSampler {
    n: usize,
    /// Column-major running sums.
    cdf: Vec<f64>,
    /// Per column, the last output with positive probability; it absorbs the
    /// rounding slack between the final running sum and 1.
    last: Vec<usize>,
}

impl ColumnSampler {
    pub fn new(m: &Mechanism) -> Self {
        let dim = m.dim();
        let mut cdf = Vec::with_capacity(dim * dim);
        let mut last = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut acc = 0.0;
            let mut last_positive = 0;
            for (i, p) in m.column(j).enumerate() {
                if p > 0.0 {
                    last_positive = i;
                }
                acc += p;
                cdf.push(acc);
            }
            last.push(last_positive);
        }
        Self { n: m.n(), cdf, last }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, input: usize, rng: &mut R) -> Result<usize> {
        if input > self.n {
            return Err(Error::InputOutOfRange { input, n: self.n });
        }
        let dim = self.n + 1;
        let column = &self.cdf[input * dim..(input + 1) * dim];
        let u: f64 = rng.random();
        let idx = column.partition_point(|&c| c <= u);
        Ok(idx.min(self.last[input]))
    }
}

/// Draws one output of `m` on input `input`.
pub fn sample_output<R: Rng + ?Sized>(m: &Mechanism, input: usize, rng: &mut R) -> Result<usize> {
    ColumnSampler::new(m).sample(input, rng)
}
