use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};

/// True counts of a collection of equally sized groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCounts {
    n: usize,
    counts: Vec<usize>,
}

impl GroupCounts {
    pub fn new(n: usize, counts: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = counts.iter().find(|&&c| c > n) {
            return Err(Error::InputOutOfRange { input: bad, n });
        }
        Ok(Self { n, counts })
    }

    /// Sums consecutive bits in groups of `group_size`; an incomplete final
    /// group is dropped.
    pub fn from_bits(bits: &[bool], group_size: usize) -> Result<Self> {
        if group_size == 0 {
            return Err(Error::InvalidGroupSize(0));
        }
        let counts = bits
            .chunks_exact(group_size)
            .map(|g| g.iter().filter(|&&b| b).count())
            .collect();
        Ok(Self { n: group_size, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Splits `total` individuals into `total / n` groups of size `n` (leftovers
/// dropped) with each individual's bit set independently with probability `p`.
pub fn binomial_population<R: Rng + ?Sized>(total: usize, n: usize, p: f64, rng: &mut R) -> Result<GroupCounts> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadProbability(p));
    }
    if n == 0 {
        return Err(Error::InvalidGroupSize(0));
    }
    let dist = Binomial::new(n as u64, p).map_err(|_| Error::BadProbability(p))?;
    let counts = (0..total / n).map(|_| dist.sample(rng) as usize).collect();
    GroupCounts::new(n, counts)
}
