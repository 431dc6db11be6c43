//! The mechanism data model: an `(n+1) x (n+1)` column-stochastic matrix whose
//! entry `(i, j)` is the probability of reporting `i` when the true count is `j`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Default tolerance for validation and for every predicate in this crate.
pub const EPS_TOL: f64 = 1e-9;

/// The privacy parameter `alpha` in `(0, 1]`. Smaller values mean weaker privacy.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PrivacyLevel(f64);

impl PrivacyLevel {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::AlphaOutOfRange(alpha))
        }
    }

    /// Converts an `epsilon`-DP budget via `alpha = exp(-epsilon)`.
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0) || epsilon.is_infinite() {
            return Err(Error::AlphaOutOfRange(libm::exp(-epsilon)));
        }
        Self::new(libm::exp(-epsilon))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Rejects `alpha = 1`, for the closed forms that need `alpha < 1`.
    pub(crate) fn strict(self) -> Result<f64> {
        if self.0 < 1.0 {
            Ok(self.0)
        } else {
            Err(Error::AlphaOutOfRange(self.0))
        }
    }
}

impl fmt::Display for PrivacyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A validated randomized mechanism for a group of `n` individuals.
///
/// Stored row-major: `entries[i * (n + 1) + j] = Pr[i | j]`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Mechanism {
    n: usize,
    entries: Vec<f64>,
}

impl Mechanism {
    /// Builds a mechanism from its rows (row index = output, column index = input).
    pub fn new(n: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tolerance(n, rows, EPS_TOL)
    }

    pub fn with_tolerance(n: usize, rows: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let dim = n + 1;
        if rows.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rows.len(),
            });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::from_row_major_with_tolerance(n, entries, tol)
    }

    pub fn from_row_major(n: usize, entries: Vec<f64>) -> Result<Self> {
        Self::from_row_major_with_tolerance(n, entries, EPS_TOL)
    }

    pub fn from_row_major_with_tolerance(n: usize, entries: Vec<f64>, tol: f64) -> Result<Self> {
        let dim = n + 1;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        for (k, &value) in entries.iter().enumerate() {
            if !(value >= -tol && value <= 1.0 + tol) {
                return Err(Error::EntryOutOfRange {
                    row: k / dim,
                    col: k % dim,
                    value,
                });
            }
        }
        for col in 0..dim {
            let sum: f64 = (0..dim).map(|row| entries[row * dim + col]).sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::ColumnSumError { col, sum });
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds a mechanism entry-by-entry from `f(output, input)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let dim = n + 1;
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self::from_row_major(n, entries)
    }

    /// The deterministic truthful mechanism.
    pub fn identity(n: usize) -> Self {
        let dim = n + 1;
        let entries = (0..dim * dim)
            .map(|k| if k / dim == k % dim { 1.0 } else { 0.0 })
            .collect();
        Self { n, entries }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// `Pr[output | input]`.
    #[inline]
    pub fn get(&self, output: usize, input: usize) -> f64 {
        self.entries[output * self.dim() + input]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, output: usize) -> &[f64] {
        let dim = self.dim();
        &self.entries[output * dim..(output + 1) * dim]
    }

    pub fn column(&self, input: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(move |i| self.get(i, input))
    }

    pub fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(move |i| self.get(i, i))
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().sum()
    }

    /// Largest absolute entrywise difference; `None` if the sizes differ.
    pub fn max_abs_diff(&self, other: &Mechanism) -> Option<f64> {
        if self.n != other.n {
            return None;
        }
        Some(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }

    /// Checks `alpha <= Pr[i|j] / Pr[i|j+1] <= 1/alpha` for every row and
    /// adjacent pair of inputs, written multiplicatively so zero entries are fine.
    pub fn is_dp(&self, alpha: PrivacyLevel, tol: f64) -> bool {
        let a = alpha.get();
        let dim = self.dim();
        (0..dim).all(|i| {
            self.row(i)
                .windows(2)
                .all(|w| a * w[1] - w[0] <= tol && a * w[0] - w[1] <= tol)
        })
    }

    /// True when every adjacent pair in every row meets one of its two DP
    /// inequalities with equality (within `tol`).
    pub fn is_dp_tight(&self, alpha: PrivacyLevel, tol: f64) -> bool {
        let a = alpha.get();
        self.is_dp(alpha, tol)
            && (0..self.dim()).all(|i| {
                self.row(i)
                    .windows(2)
                    .all(|w| (a * w[1] - w[0]).abs() <= tol || (a * w[0] - w[1]).abs() <= tol)
            })
    }
}
