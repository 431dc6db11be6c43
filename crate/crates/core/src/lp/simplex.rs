//! Dense two-phase primal simplex.
//!
//! Pricing is Dantzig's rule until a run of degenerate pivots, then Bland's
//! smallest-index rule until the objective moves again; Bland's rule alone
//! cannot cycle, so the hybrid terminates. The ratio test breaks ties by the
//! smallest basic index. The tableau is periodically rebuilt from the
//! original data through an explicit basis inverse, and every optimality or
//! unboundedness verdict is confirmed on a fresh rebuild.

use alloc::vec;
use alloc::vec::Vec;

use super::program::{LinearProgram, LpSolution, LpStatus, Relation};
use crate::error::{Error, Result};

/// Smallest magnitude accepted as a pivot element.
pub const PIVOT_TOL: f64 = 1e-12;
/// Column entries at or below this are skipped by the ratio test; smaller
/// pivots amplify round-off on degenerate design problems.
const RATIO_TOL: f64 = 1e-9;
/// Relative width of the window in which ratio-test candidates count as tied.
const TIE_TOL: f64 = 1e-9;
/// Reduced costs above `-OPT_TOL` count as non-negative.
const OPT_TOL: f64 = 1e-10;
/// Phase-one residual above which the problem is declared infeasible.
const FEAS_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_RUN: usize = 20;
/// Pivot elements below this trigger a rebuild before they are used.
const SMALL_PIVOT: f64 = 1e-6;
/// Pivots between rebuilds of the tableau from the original data.
const REINVERT_EVERY: usize = 100;

pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let std = StandardForm::build(lp);
    let mut tab = Tableau::new(&std);

    if tab.num_artificial > 0 {
        let mut phase_one = vec![0.0; tab.cols];
        phase_one[tab.first_artificial..].iter_mut().for_each(|c| *c = 1.0);
        tab.set_costs(phase_one);
        if tab.run()? == LpStatus::Unbounded {
            // phase one is bounded below by zero
            return Err(Error::NumericalInstability);
        }
        if tab.objective() > FEAS_TOL {
            return Ok(LpSolution::infeasible());
        }
        tab.drive_out_artificials()?;
    }

    let mut phase_two = std.cost.clone();
    phase_two.resize(tab.cols, 0.0);
    tab.set_costs(phase_two);
    if tab.run()? == LpStatus::Unbounded {
        return Ok(LpSolution::unbounded());
    }

    let mut xs = vec![0.0; tab.cols];
    for (r, &b) in tab.basis.iter().enumerate() {
        xs[b] = tab.at(r, tab.cols);
    }
    let values = std.recover(&xs);
    let objective_value = lp.evaluate(&values);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        values,
        objective_value,
    })
}

/// The problem rewritten as `min c.x'  s.t.  A x' (rel) b, x' >= 0, b >= 0`.
struct StandardForm {
    /// Structural column -> (original variable, sign).
    columns: Vec<(usize, f64)>,
    offset: Vec<f64>,
    rows: Vec<(Vec<f64>, Relation, f64)>,
    cost: Vec<f64>,
    num_vars: usize,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let num_vars = lp.num_vars();
        let mut offset = vec![0.0; num_vars];
        let mut columns = Vec::with_capacity(num_vars);
        let mut upper = Vec::new();
        for (k, &(lo, hi)) in lp.bounds().iter().enumerate() {
            if lo.is_finite() {
                offset[k] = lo;
                columns.push((k, 1.0));
                if hi.is_finite() {
                    upper.push((columns.len() - 1, hi - lo));
                }
            } else if hi.is_finite() {
                offset[k] = hi;
                columns.push((k, -1.0));
            } else {
                columns.push((k, 1.0));
                columns.push((k, -1.0));
            }
        }
        let width = columns.len();
        let mut rows = Vec::with_capacity(lp.constraints().len() + upper.len());
        for c in lp.constraints() {
            let a: Vec<f64> = columns.iter().map(|&(k, s)| c.coeffs[k] * s).collect();
            rows.push((a, c.relation, c.rhs - c.lhs(&offset)));
        }
        // skip bounds already implied by a row with non-negative coefficients,
        // such as a probability inside a column that sums to one
        let implied = |col: usize, ub: f64, rows: &[(Vec<f64>, Relation, f64)]| {
            rows.iter().any(|(a, rel, rhs)| {
                *rel != Relation::Ge && a[col] > 0.0 && a.iter().all(|&v| v >= 0.0) && *rhs / a[col] <= ub
            })
        };
        for (col, ub) in upper {
            if implied(col, ub, &rows) {
                continue;
            }
            let mut a = vec![0.0; width];
            a[col] = 1.0;
            rows.push((a, Relation::Le, ub));
        }
        for (a, rel, rhs) in rows.iter_mut() {
            let flip = *rhs < 0.0 || (*rhs == 0.0 && *rel == Relation::Ge);
            if flip {
                a.iter_mut().for_each(|v| *v = -*v);
                *rhs = -*rhs;
                *rel = match *rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }
        let cost = columns.iter().map(|&(k, s)| lp.objective()[k] * s).collect();
        Self {
            columns,
            offset,
            rows,
            cost,
            num_vars,
        }
    }

    fn recover(&self, xs: &[f64]) -> Vec<f64> {
        let mut x = self.offset.clone();
        for (col, &(k, s)) in self.columns.iter().enumerate() {
            // solver noise below zero is not a real excursion
            let v = if xs[col] < 0.0 && xs[col] > -1e-9 { 0.0 } else { xs[col] };
            x[k] += s * v;
        }
        debug_assert_eq!(x.len(), self.num_vars);
        x
    }
}

struct Tableau {
    rows: usize,
    /// Columns excluding the right-hand side, which sits at index `cols`.
    cols: usize,
    data: Vec<f64>,
    /// Starting rows `[A | b]`, kept for reinversion.
    initial: Vec<f64>,
    /// Objective of the current phase, one entry per column.
    phase_cost: Vec<f64>,
    /// Reduced costs; the right-hand-side slot holds minus the objective.
    cost: Vec<f64>,
    basis: Vec<usize>,
    allowed: Vec<bool>,
    first_artificial: usize,
    num_artificial: usize,
    /// Artificial column (offset from `first_artificial`) -> starting row.
    artificial_row: Vec<usize>,
    pivots_since_reinvert: usize,
}

impl Tableau {
    fn new(std: &StandardForm) -> Self {
        let structural = std.columns.len();
        let rows = std.rows.len();
        let num_slack = std.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let num_artificial = std.rows.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = structural + num_slack;
        let cols = first_artificial + num_artificial;
        let width = cols + 1;
        let mut data = vec![0.0; rows * width];
        let mut basis = vec![0; rows];
        let (mut slack, mut art) = (structural, first_artificial);
        let mut artificial_row = Vec::with_capacity(num_artificial);
        for (r, (a, rel, rhs)) in std.rows.iter().enumerate() {
            let row = &mut data[r * width..(r + 1) * width];
            row[..structural].copy_from_slice(a);
            row[cols] = *rhs;
            match rel {
                Relation::Le => {
                    row[slack] = 1.0;
                    basis[r] = slack;
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    basis[r] = art;
                    artificial_row.push(r);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    basis[r] = art;
                    artificial_row.push(r);
                    art += 1;
                }
            }
        }
        Self {
            rows,
            cols,
            initial: data.clone(),
            data,
            phase_cost: vec![0.0; cols],
            cost: vec![0.0; width],
            basis,
            allowed: vec![true; cols],
            first_artificial,
            num_artificial,
            artificial_row,
            pivots_since_reinvert: 0,
        }
    }

    #[inline]
    fn width(&self) -> usize {
        self.cols + 1
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width() + c]
    }

    fn objective(&self) -> f64 {
        -self.cost[self.cols]
    }

    fn set_costs(&mut self, phase_cost: Vec<f64>) {
        self.phase_cost = phase_cost;
        self.price();
    }

    /// Reduced costs `c - c_B B^-1 A` from the current tableau.
    fn price(&mut self) {
        let width = self.width();
        for c in 0..width {
            self.cost[c] = if c < self.cols { self.phase_cost[c] } else { 0.0 };
        }
        for r in 0..self.rows {
            let cb = self.phase_cost[self.basis[r]];
            if cb != 0.0 {
                for c in 0..width {
                    self.cost[c] -= cb * self.data[r * width + c];
                }
            }
        }
        for &b in &self.basis {
            self.cost[b] = 0.0;
        }
    }

    /// Pivots until optimal or unbounded. Both verdicts are confirmed against a
    /// freshly reinverted tableau before being returned.
    fn run(&mut self) -> Result<LpStatus> {
        let limit = 50_000 + 50 * (self.rows + self.cols);
        let mut degenerate = 0usize;
        let mut bland = false;
        for _ in 0..limit {
            if self.pivots_since_reinvert >= REINVERT_EVERY {
                self.reinvert()?;
            }
            let Some(entering) = self.entering(bland) else {
                if self.pivots_since_reinvert > 0 {
                    self.reinvert()?;
                    continue;
                }
                return Ok(LpStatus::Optimal);
            };
            let Some((leaving, step)) = self.leaving(entering, bland) else {
                if self.pivots_since_reinvert > 0 {
                    self.reinvert()?;
                    continue;
                }
                return Ok(LpStatus::Unbounded);
            };
            if self.at(leaving, entering) < SMALL_PIVOT && self.pivots_since_reinvert > 0 {
                // may be round-off masquerading as a pivot; decide on fresh data
                self.reinvert()?;
                continue;
            }
            if step <= PIVOT_TOL {
                degenerate += 1;
                bland = degenerate >= DEGENERATE_RUN;
            } else {
                degenerate = 0;
                bland = false;
            }
            self.pivot(leaving, entering);
        }
        Err(Error::NumericalInstability)
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let candidates = (0..self.cols).filter(|&c| self.allowed[c] && self.cost[c] < -OPT_TOL);
        if bland {
            candidates.min()
        } else {
            // first index wins among equal reduced costs
            candidates.fold(None, |best: Option<usize>, c| match best {
                Some(b) if self.cost[b] <= self.cost[c] => Some(b),
                _ => Some(c),
            })
        }
    }

    /// Ratio test. Rows whose ratio is within a small window of the minimum
    /// count as tied; ties go to the smallest basic index under Bland's rule
    /// and to the largest pivot element otherwise.
    fn leaving(&self, entering: usize, bland: bool) -> Option<(usize, f64)> {
        let ratio = |r: usize| self.at(r, self.cols).max(0.0) / self.at(r, entering);
        let eligible = || (0..self.rows).filter(|&r| self.at(r, entering) > RATIO_TOL);
        let min = eligible().map(ratio).min_by(f64::total_cmp)?;
        let window = min + TIE_TOL * (1.0 + min);
        let tied = eligible().filter(|&r| ratio(r) <= window);
        let row = if bland {
            tied.min_by_key(|&r| self.basis[r])
        } else {
            tied.fold(None, |best: Option<usize>, r| match best {
                Some(b) if self.at(b, entering) >= self.at(r, entering) => Some(b),
                _ => Some(r),
            })
        }?;
        Some((row, min))
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let width = self.width();
        let inv = 1.0 / self.at(pr, pc);
        let row_start = pr * width;
        for c in 0..width {
            self.data[row_start + c] *= inv;
        }
        self.data[row_start + pc] = 1.0;
        let nonzero: Vec<usize> = (0..width).filter(|&c| self.data[row_start + c] != 0.0).collect();
        let pivot_row: Vec<f64> = nonzero.iter().map(|&c| self.data[row_start + c]).collect();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let base = r * width;
            let factor = self.data[base + pc];
            if factor == 0.0 {
                continue;
            }
            for (&c, &v) in nonzero.iter().zip(&pivot_row) {
                self.data[base + c] -= factor * v;
            }
            self.data[base + pc] = 0.0;
        }
        let factor = self.cost[pc];
        if factor != 0.0 {
            for (&c, &v) in nonzero.iter().zip(&pivot_row) {
                self.cost[c] -= factor * v;
            }
            self.cost[pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.pivots_since_reinvert += 1;
    }

    /// Rebuilds the tableau as `B^-1 [A | b]` from the starting rows, discarding
    /// round-off accumulated by successive pivots.
    fn reinvert(&mut self) -> Result<()> {
        let m = self.rows;
        let width = self.width();
        let mut basis_matrix = vec![0.0; m * m];
        for r in 0..m {
            for (k, &b) in self.basis.iter().enumerate() {
                basis_matrix[r * m + k] = self.initial[r * width + b];
            }
        }
        let inverse = invert(m, basis_matrix).ok_or(Error::NumericalInstability)?;
        let mut data = vec![0.0; m * width];
        for k in 0..m {
            let row = &self.initial[k * width..(k + 1) * width];
            for (c, &v) in row.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                for r in 0..m {
                    let f = inverse[r * m + k];
                    if f != 0.0 {
                        data[r * width + c] += f * v;
                    }
                }
            }
        }
        for (r, &b) in self.basis.iter().enumerate() {
            for r2 in 0..m {
                data[r2 * width + b] = if r2 == r { 1.0 } else { 0.0 };
            }
        }
        self.data = data;
        self.pivots_since_reinvert = 0;
        self.price();
        Ok(())
    }

    /// Pivots zero-level artificials out of the basis, drops rows that turn out
    /// to be redundant, and bars artificials from re-entering.
    fn drive_out_artificials(&mut self) -> Result<()> {
        let mut redundant = vec![false; self.rows];
        for r in 0..self.rows {
            if self.basis[r] < self.first_artificial {
                continue;
            }
            let replacement = (0..self.first_artificial)
                .filter(|&c| self.at(r, c).abs() > 1e-9)
                .fold(None, |best: Option<usize>, c| match best {
                    Some(b) if self.at(r, b).abs() >= self.at(r, c).abs() => Some(b),
                    _ => Some(c),
                });
            match replacement {
                Some(c) => self.pivot(r, c),
                None => redundant[r] = true,
            }
        }
        for c in self.first_artificial..self.cols {
            self.allowed[c] = false;
        }
        if redundant.iter().any(|&r| r) {
            // The artificial left basic in a redundant tableau row belongs to an
            // original row that the others already imply; that original row is
            // the one to drop from the starting data.
            let width = self.width();
            let dropped: Vec<usize> = (0..self.rows)
                .filter(|&r| redundant[r])
                .map(|r| self.artificial_row[self.basis[r] - self.first_artificial])
                .collect();
            self.initial = (0..self.rows)
                .filter(|r| !dropped.contains(r))
                .flat_map(|r| self.initial[r * width..(r + 1) * width].iter().copied())
                .collect();
            self.basis = (0..self.rows).filter(|&r| !redundant[r]).map(|r| self.basis[r]).collect();
            self.rows = self.basis.len();
        }
        self.reinvert()
    }
}

/// Gauss-Jordan inversion with partial pivoting of an `m x m` row-major matrix.
fn invert(m: usize, mut a: Vec<f64>) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&x, &y| a[x * m + col].abs().total_cmp(&a[y * m + col].abs()))?;
        if a[piv * m + col].abs() <= PIVOT_TOL {
            return None;
        }
        if piv != col {
            for k in 0..m {
                a.swap(piv * m + k, col * m + k);
                inv.swap(piv * m + k, col * m + k);
            }
        }
        let d = 1.0 / a[col * m + col];
        for k in 0..m {
            a[col * m + k] *= d;
            inv[col * m + k] *= d;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = a[r * m + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..m {
                a[r * m + k] -= f * a[col * m + k];
                inv[r * m + k] -= f * inv[col * m + k];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn maximize_single_bounded_variable() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(vec![-1.0]).unwrap();
        lp.set_bounds(0, 0.0, 1.0).unwrap();
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.objective_value, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn covering_constraint() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![1.0, 1.0]).unwrap();
        lp.add_sparse(&[(0, 1.0), (1, 1.0)], Relation::Ge, 2.0).unwrap();
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, 2.0, epsilon = 1e-12);
        assert!(lp.max_violation(&sol.values) <= 1e-12);
    }

    #[test]
    fn detects_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.add_sparse(&[(0, 1.0)], Relation::Ge, 2.0).unwrap();
        lp.set_bounds(0, 0.0, 1.0).unwrap();
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![-1.0, 0.0]).unwrap();
        lp.add_sparse(&[(0, 1.0), (1, -1.0)], Relation::Le, 1.0).unwrap();
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_negative_bounds() {
        // min x + 2y, x free, y in (-inf, 3], x - y >= -1, x + y = 1
        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![1.0, 2.0]).unwrap();
        lp.set_bounds(0, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        lp.set_bounds(1, f64::NEG_INFINITY, 3.0).unwrap();
        lp.add_sparse(&[(0, 1.0), (1, -1.0)], Relation::Ge, -1.0).unwrap();
        lp.add_sparse(&[(0, 1.0), (1, 1.0)], Relation::Eq, 1.0).unwrap();
        // x = 1 - y, x - y = 1 - 2y >= -1 => y <= 1; cost = 1 + y, unbounded below as y -> -inf
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
        lp.set_bounds(1, -2.0, 3.0).unwrap();
        let sol = solve_lp(&lp).unwrap();
        assert_abs_diff_eq!(sol.values[1], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.values[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.objective_value, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![1.0, -1.0]).unwrap();
        lp.add_sparse(&[(0, 1.0), (1, 1.0)], Relation::Eq, 1.0).unwrap();
        lp.add_sparse(&[(0, 2.0), (1, 2.0)], Relation::Eq, 2.0).unwrap();
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // a classic cycling example under the largest-coefficient rule
        let mut lp = LinearProgram::new(4);
        lp.set_objective(vec![-0.75, 150.0, -0.02, 6.0]).unwrap();
        lp.add_sparse(&[(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)], Relation::Le, 0.0).unwrap();
        lp.add_sparse(&[(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)], Relation::Le, 0.0).unwrap();
        lp.add_sparse(&[(2, 1.0)], Relation::Le, 1.0).unwrap();
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, -0.05, epsilon = 1e-12);
    }

    #[test]
    fn no_constraints() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(vec![1.0, 0.0]).unwrap();
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.values, vec![0.0, 0.0]);
    }
}
