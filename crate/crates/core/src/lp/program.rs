use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// One linear row `coeffs . x  rel  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    /// Amount by which `x` violates this row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `minimize objective . x` subject to `constraints` and per-variable `bounds`.
/// Bounds may be infinite on either side.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
    bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// A problem over `num_vars` non-negative variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn set_objective(&mut self, objective: Vec<f64>) -> Result<()> {
        self.check_len(objective.len())?;
        self.objective = objective;
        Ok(())
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Result<()> {
        self.check_len(coeffs.len())?;
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(())
    }

    /// Adds a row given as sparse `(variable, coefficient)` pairs.
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) -> Result<()> {
        let mut coeffs = vec![0.0; self.num_vars];
        for &(var, c) in terms {
            if var >= self.num_vars {
                return Err(Error::DimensionMismatch {
                    expected: self.num_vars,
                    found: var + 1,
                });
            }
            coeffs[var] += c;
        }
        self.add_constraint(coeffs, relation, rhs)
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) -> Result<()> {
        if var >= self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: var + 1,
            });
        }
        if !(lo <= hi) || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidBounds { var, lo, hi });
        }
        self.bounds[var] = (lo, hi);
        Ok(())
    }

    pub fn set_all_bounds(&mut self, lo: f64, hi: f64) -> Result<()> {
        for var in 0..self.num_vars {
            self.set_bounds(var, lo, hi)?;
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.constraints.iter().map(|c| c.violation(x));
        let bounds = self
            .bounds
            .iter()
            .zip(x)
            .map(|(&(lo, hi), &v)| (lo - v).max(v - hi).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.num_vars {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: len,
            })
        }
    }
}

/// Plain-text dump: a `minimize` line, one line per constraint
/// (`coefficients relation rhs`), then one `bounds lo hi` line per variable.
/// Numbers are fixed-point with 12 decimals.
impl fmt::Display for LinearProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("minimize")?;
        for c in &self.objective {
            write!(f, " {c:.12}")?;
        }
        writeln!(f)?;
        for row in &self.constraints {
            for (k, c) in row.coeffs.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{c:.12}")?;
            }
            writeln!(f, " {} {:.12}", row.relation.symbol(), row.rhs)?;
        }
        for &(lo, hi) in &self.bounds {
            writeln!(f, "bounds {lo:.12} {hi:.12}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Variable values; empty unless `status` is `Optimal`.
    pub values: Vec<f64>,
    /// `NaN` when infeasible, `-inf` when unbounded.
    pub objective_value: f64,
}

impl LpSolution {
    pub(crate) fn infeasible() -> Self {
        Self {
            status: LpStatus::Infeasible,
            values: Vec::new(),
            objective_value: f64::NAN,
        }
    }

    pub(crate) fn unbounded() -> Self {
        Self {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective_value: f64::NEG_INFINITY,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn rejects_wrong_lengths_and_bounds() {
        let mut lp = LinearProgram::new(2);
        assert!(lp.add_constraint(vec![1.0], Relation::Le, 1.0).is_err());
        assert!(lp.set_objective(vec![1.0, 2.0, 3.0]).is_err());
        assert!(lp.set_bounds(0, 1.0, 0.0).is_err());
        assert!(lp.set_bounds(2, 0.0, 1.0).is_err());
        assert!(lp.add_sparse(&[(5, 1.0)], Relation::Le, 1.0).is_err());
    }

    #[test]
    fn violation_measures() {
        let mut lp = LinearProgram::new(2);
        lp.add_sparse(&[(0, 1.0), (1, 1.0)], Relation::Ge, 2.0).unwrap();
        lp.set_bounds(1, 0.0, 1.0).unwrap();
        assert_eq!(lp.max_violation(&[1.0, 1.0]), 0.0);
        assert_eq!(lp.max_violation(&[0.5, 1.0]), 0.5);
        assert_eq!(lp.max_violation(&[0.0, 3.0]), 2.0);
    }

    #[test]
    fn dump_format() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![1.0, -0.5]).unwrap();
        lp.add_sparse(&[(0, 1.0), (1, 2.0)], Relation::Le, 3.0).unwrap();
        let text = lp.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "minimize 1.000000000000 -0.500000000000");
        assert_eq!(lines[1], "1.000000000000 2.000000000000 <= 3.000000000000");
        assert_eq!(lines[2], "bounds 0.000000000000 inf");
        assert_eq!(lines.len(), 4);
    }
}
