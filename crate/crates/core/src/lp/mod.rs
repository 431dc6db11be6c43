//! Linear programs: a small modeling layer, a dense simplex solver, and the
//! mechanism-design formulation built on top of them.

mod design;
mod program;
mod simplex;

pub use design::{build_lp, design_mechanism};
pub use program::{Constraint, LinearProgram, LpSolution, LpStatus, Relation};
pub use simplex::{solve_lp, PIVOT_TOL};
