//! LP formulation of optimal mechanism design.
//!
//! Variable `i * (n + 1) + j` holds `Pr[output i | input j]`.

use alloc::vec::Vec;

use super::program::{LinearProgram, LpStatus, Relation};
use super::simplex::solve_lp;
use crate::error::{Error, Result};
use crate::mechanism::{Mechanism, PrivacyLevel, EPS_TOL};
use crate::objective::{Aggregator, Objective};
use crate::property::{check_property, ConstraintSet, Property};

#[inline]
fn var(n: usize, i: usize, j: usize) -> usize {
    i * (n + 1) + j
}

pub fn build_lp(n: usize, alpha: PrivacyLevel, props: ConstraintSet, obj: &Objective) -> Result<LinearProgram> {
    if n == 0 {
        return Err(Error::UndefinedForN0);
    }
    if obj.aggregator() == Aggregator::Max {
        return Err(Error::UnsupportedObjective);
    }
    if obj.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: obj.weights().len(),
        });
    }
    let dim = n + 1;
    let a = alpha.get();
    let mut lp = LinearProgram::new(dim * dim);
    lp.set_all_bounds(0.0, 1.0)?;

    let scale = if obj.rescale() { dim as f64 / n as f64 } else { 1.0 };
    let mut c = alloc::vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            c[var(n, i, j)] = scale * obj.weights()[j] * obj.cell_cost(i, j);
        }
    }
    lp.set_objective(c)?;

    for j in 0..dim {
        let terms: Vec<(usize, f64)> = (0..dim).map(|i| (var(n, i, j), 1.0)).collect();
        lp.add_sparse(&terms, Relation::Eq, 1.0)?;
    }
    for i in 0..dim {
        for j in 0..n {
            let (here, next) = (var(n, i, j), var(n, i, j + 1));
            lp.add_sparse(&[(here, 1.0), (next, -a)], Relation::Ge, 0.0)?;
            lp.add_sparse(&[(next, 1.0), (here, -a)], Relation::Ge, 0.0)?;
        }
    }
    for prop in props.iter() {
        add_property_rows(&mut lp, n, prop)?;
    }
    Ok(lp)
}

/// `larger - smaller >= 0`
fn dominate(lp: &mut LinearProgram, larger: usize, smaller: usize) -> Result<()> {
    lp.add_sparse(&[(larger, 1.0), (smaller, -1.0)], Relation::Ge, 0.0)
}

fn add_property_rows(lp: &mut LinearProgram, n: usize, prop: Property) -> Result<()> {
    let dim = n + 1;
    match prop {
        Property::RowHonesty => {
            for i in 0..dim {
                for j in (0..dim).filter(|&j| j != i) {
                    dominate(lp, var(n, i, i), var(n, i, j))?;
                }
            }
        }
        Property::ColumnHonesty => {
            for j in 0..dim {
                for i in (0..dim).filter(|&i| i != j) {
                    dominate(lp, var(n, j, j), var(n, i, j))?;
                }
            }
        }
        Property::RowMonotone => {
            for i in 0..dim {
                for j in 1..=i {
                    dominate(lp, var(n, i, j), var(n, i, j - 1))?;
                }
                for j in i..n {
                    dominate(lp, var(n, i, j), var(n, i, j + 1))?;
                }
            }
        }
        Property::ColumnMonotone => {
            for j in 0..dim {
                for i in 1..=j {
                    dominate(lp, var(n, i, j), var(n, i - 1, j))?;
                }
                for i in j..n {
                    dominate(lp, var(n, i, j), var(n, i + 1, j))?;
                }
            }
        }
        Property::Fairness => {
            for i in 1..dim {
                lp.add_sparse(&[(var(n, i, i), 1.0), (var(n, 0, 0), -1.0)], Relation::Eq, 0.0)?;
            }
        }
        Property::WeakHonesty => {
            for i in 0..dim {
                lp.add_sparse(&[(var(n, i, i), 1.0)], Relation::Ge, 1.0 / dim as f64)?;
            }
        }
        Property::Symmetry => {
            for i in 0..dim {
                for j in 0..dim {
                    let mirror = var(n, n - i, n - j);
                    if var(n, i, j) < mirror {
                        lp.add_sparse(&[(var(n, i, j), 1.0), (mirror, -1.0)], Relation::Eq, 0.0)?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Solves for an optimal `alpha`-DP mechanism with the requested properties and
/// checks the result against the DP and property predicates before returning.
pub fn design_mechanism(n: usize, alpha: PrivacyLevel, props: ConstraintSet, obj: &Objective) -> Result<Mechanism> {
    let lp = build_lp(n, alpha, props, obj)?;
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        // the uniform mechanism is always feasible and the region is bounded
        return Err(Error::Solver(sol.status));
    }
    let entries = sol.values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let m = Mechanism::from_row_major_with_tolerance(n, entries, EPS_TOL)?;
    if !m.is_dp(alpha, EPS_TOL) {
        return Err(Error::Verification("solution violates differential privacy"));
    }
    if !props.iter().all(|p| check_property(&m, p, EPS_TOL)) {
        return Err(Error::Verification("solution violates a requested property"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::{em_l0_cost, geometric, gm_l0_cost};
    use crate::objective::{l0_score, objective_value};
    use approx::assert_abs_diff_eq;

    fn alpha(a: f64) -> PrivacyLevel {
        PrivacyLevel::new(a).unwrap()
    }

    fn props(s: &str) -> ConstraintSet {
        s.parse().unwrap()
    }

    #[test]
    fn row_counts() {
        let lp = build_lp(1, alpha(0.5), ConstraintSet::empty(), &Objective::lp_norm(1, 1)).unwrap();
        assert_eq!(lp.num_vars(), 4);
        assert_eq!(lp.constraints().len(), 2 + 4);
        let eq = lp.constraints().iter().filter(|c| c.relation == Relation::Eq).count();
        assert_eq!(eq, 2);

        let base = build_lp(2, alpha(0.5), ConstraintSet::empty(), &Objective::l0(2)).unwrap();
        assert_eq!(base.constraints().len(), 3 + 12);
        let wh = build_lp(2, alpha(0.5), props("WH"), &Objective::l0(2)).unwrap();
        assert_eq!(wh.constraints().len() - base.constraints().len(), 3);
        let last = wh.constraints().last().unwrap();
        assert_eq!(last.relation, Relation::Ge);
        assert_abs_diff_eq!(last.rhs, 1.0 / 3.0, epsilon = 1e-15);
        let s = build_lp(2, alpha(0.5), props("S"), &Objective::l0(2)).unwrap();
        assert_eq!(s.constraints().len() - base.constraints().len(), 4);
        let f = build_lp(5, alpha(0.5), props("F"), &Objective::l0(5)).unwrap();
        let f0 = build_lp(5, alpha(0.5), ConstraintSet::empty(), &Objective::l0(5)).unwrap();
        assert_eq!(f.constraints().len() - f0.constraints().len(), 5);
    }

    #[test]
    fn objective_coefficients() {
        let lp = build_lp(2, alpha(0.5), ConstraintSet::empty(), &Objective::lp_norm(2, 2)).unwrap();
        // cell (0, 2): weight 1/3 times distance squared
        assert_abs_diff_eq!(lp.objective()[2], 4.0 / 3.0, epsilon = 1e-15);
        assert_eq!(lp.objective()[4], 0.0);
        let tail = build_lp(4, alpha(0.5), ConstraintSet::empty(), &Objective::l0d(4, 2).unwrap()).unwrap();
        assert_eq!(tail.objective()[var(4, 1, 0)], 0.0);
        assert_abs_diff_eq!(tail.objective()[var(4, 2, 0)], 0.2 * 1.25, epsilon = 1e-15);
    }

    #[test]
    fn max_aggregator_unsupported() {
        let obj = Objective::l0(2).with_aggregator(Aggregator::Max);
        assert_eq!(build_lp(2, alpha(0.5), ConstraintSet::empty(), &obj), Err(Error::UnsupportedObjective));
    }

    #[test]
    fn basic_lp_recovers_gm() {
        let m = design_mechanism(2, alpha(0.5), ConstraintSet::empty(), &Objective::l0(2)).unwrap();
        assert_abs_diff_eq!(l0_score(&m).unwrap(), 2.0 / 3.0, epsilon = 1e-9);
        let gm = geometric(2, alpha(0.5)).unwrap();
        assert!(m.max_abs_diff(&gm).unwrap() < 1e-7);
    }

    #[test]
    fn n1_any_props_gives_randomized_response() {
        for a in [0.2, 0.5, 0.9] {
            for p in ["none", "F", "all", "WH,CM"] {
                let m = design_mechanism(1, alpha(a), props(p), &Objective::l0(1)).unwrap();
                assert_abs_diff_eq!(m.get(0, 0), 1.0 / (1.0 + a), epsilon = 1e-9);
                assert_abs_diff_eq!(m.get(1, 1), 1.0 / (1.0 + a), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn all_props_match_fair_cost() {
        let m = design_mechanism(7, alpha(0.62), ConstraintSet::all(), &Objective::l0(7)).unwrap();
        let v = objective_value(&m, &Objective::l0(7)).unwrap();
        assert_abs_diff_eq!(v, em_l0_cost(7, alpha(0.62)).unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn weak_honesty_above_threshold_costs_nothing() {
        let m = design_mechanism(10, alpha(0.76), props("WH"), &Objective::l0(10)).unwrap();
        assert_abs_diff_eq!(l0_score(&m).unwrap(), gm_l0_cost(alpha(0.76)).unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn alpha_one_forces_input_independence() {
        let m = design_mechanism(3, alpha(1.0), ConstraintSet::empty(), &Objective::l0(3)).unwrap();
        for i in 0..4 {
            assert!(m.row(i).iter().all(|&p| (p - m.get(i, 0)).abs() < 1e-9));
        }
        assert_abs_diff_eq!(l0_score(&m).unwrap(), 1.0, epsilon = 1e-9);
    }
}
