//! Design, analysis and evaluation of differentially private mechanisms for
//! count queries over groups of `n` individuals.
//!
//! A mechanism is an `(n+1) x (n+1)` column-stochastic matrix whose entry
//! `(i, j)` is the probability of reporting `i` when the true count is `j`.
//! The crate is `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod analysis;
pub mod eval;
pub mod explicit;
pub mod lp;
pub mod mechanism;
pub mod objective;
pub mod property;
pub mod symmetry;

pub use analysis::{
    fair_diagonal_bound, gm_derivable, gm_has_weak_honesty, gm_is_column_monotone, gm_weak_honesty_threshold,
    property_report, property_report_with_tolerance, select_strategy, PropertyReport, SelectionResult, Strategy,
};
pub use error::{Error, Result};
pub use eval::{
    binomial_population, empirical_l0d, empirical_rmse, evaluate, sample_output, EvalConfig, EvalResult, GroupCounts,
    Metric,
};
pub use explicit::{
    em_l0_cost, explicit_fair, geometric, gm_l0_cost, randomized_response, uniform, EmParams, GmParams,
};
pub use lp::{build_lp, design_mechanism, solve_lp, LinearProgram, LpSolution, LpStatus, Relation};
pub use mechanism::{Mechanism, PrivacyLevel, EPS_TOL};
pub use objective::{l0_score, l0d_score, objective_value, Aggregator, Objective};
pub use property::{check_property, satisfied, ConstraintSet, Property};
pub use symmetry::symmetrize;
