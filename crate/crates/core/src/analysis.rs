//! Threshold results for the named mechanisms, the mechanism-selection
//! flowchart for L0, and whole-mechanism property reports.

use alloc::collections::BTreeMap;
use core::fmt;

use crate::error::Result;
use crate::explicit::EmParams;
use crate::mechanism::{Mechanism, PrivacyLevel, EPS_TOL};
use crate::objective::{l0_score, l0d_score};
use crate::property::{satisfied, ConstraintSet, Property};

/// Smallest group size at which GM is weakly honest: `2 alpha / (1 - alpha)`.
pub fn gm_weak_honesty_threshold(alpha: PrivacyLevel) -> Result<f64> {
    let a = alpha.strict()?;
    Ok(2.0 * a / (1.0 - a))
}

/// Whether GM of size `n` is weakly honest. For `n >= 2` this is
/// `n >= 2 alpha / (1 - alpha)`; at `n = 1` GM is randomized response, whose
/// diagonal `1 / (1 + alpha)` never drops below one half.
pub fn gm_has_weak_honesty(n: usize, alpha: PrivacyLevel) -> Result<bool> {
    let threshold = gm_weak_honesty_threshold(alpha)?;
    Ok(n <= 1 || n as f64 + EPS_TOL >= threshold)
}

/// GM is column monotone exactly when `alpha <= 1/2`.
pub fn gm_is_column_monotone(alpha: PrivacyLevel) -> bool {
    alpha.get() <= 0.5
}

/// Largest diagonal a fair `alpha`-DP mechanism of size `n` can have.
pub fn fair_diagonal_bound(n: usize, alpha: PrivacyLevel) -> Result<f64> {
    Ok(EmParams::new(n, alpha)?.y)
}

/// Whether every three adjacent entries of every row satisfy
/// `(P[i][j] - a P[i][j-1]) >= a (P[i][j+1] - a P[i][j])`, the condition under
/// which a mechanism can be obtained by post-processing GM.
pub fn gm_derivable(m: &Mechanism, alpha: PrivacyLevel, tol: f64) -> bool {
    let a = alpha.get();
    let n = m.n();
    (0..=n).all(|i| {
        let row = m.row(i);
        (1..n).all(|j| (row[j] - a * row[j - 1]) - a * (row[j + 1] - a * row[j]) >= -tol)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    UseEm,
    UseGm,
    /// Solve the LP with weak honesty only.
    SolveLpWh,
    /// Solve the LP with weak honesty and the column properties.
    SolveLpWhCm,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::UseEm => "UseEM",
            Strategy::UseGm => "UseGM",
            Strategy::SolveLpWh => "SolveLP_WH",
            Strategy::SolveLpWhCm => "SolveLP_WH_CM",
        }
    }

    /// Properties handed to the LP when the strategy calls for one.
    pub fn lp_properties(self) -> Option<ConstraintSet> {
        match self {
            Strategy::SolveLpWh => Some(ConstraintSet::empty().with(Property::WeakHonesty)),
            Strategy::SolveLpWhCm => Some(
                ConstraintSet::empty()
                    .with(Property::WeakHonesty)
                    .with(Property::RowMonotone)
                    .with(Property::ColumnMonotone),
            ),
            _ => None,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionResult {
    pub strategy: Strategy,
    pub rationale: &'static str,
}

/// Picks how to obtain an L0-optimal mechanism with the requested properties.
///
/// Fairness forces EM. Column honesty or monotonicity needs the column LP
/// unless `alpha <= 1/2`, where GM already has them. Weak honesty alone needs
/// the LP only below GM's threshold. Everything else (symmetry and the row
/// properties) is already satisfied by GM.
pub fn select_strategy(n: usize, alpha: PrivacyLevel, props: ConstraintSet) -> SelectionResult {
    let pick = |strategy, rationale| SelectionResult { strategy, rationale };
    if props.contains(Property::Fairness) {
        return pick(Strategy::UseEm, "fairness requested: EM is optimal among fair mechanisms");
    }
    if props.contains(Property::ColumnHonesty) || props.contains(Property::ColumnMonotone) {
        return if gm_is_column_monotone(alpha) {
            pick(Strategy::UseGm, "alpha <= 1/2: GM is column monotone, hence column and weakly honest")
        } else {
            pick(Strategy::SolveLpWhCm, "column property requested and GM lacks it for alpha > 1/2")
        };
    }
    if props.contains(Property::WeakHonesty) {
        let below = alpha.get() >= 1.0 || (n as f64 + EPS_TOL) < 2.0 * alpha.get() / (1.0 - alpha.get());
        if below {
            return pick(Strategy::SolveLpWh, "weak honesty requested and n is below 2a/(1-a)");
        }
        return pick(Strategy::UseGm, "n >= 2a/(1-a): GM is already weakly honest");
    }
    pick(Strategy::UseGm, "GM is symmetric and row monotone, and optimal without further constraints")
}

/// One mechanism's column of the properties table.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub properties: ConstraintSet,
    /// Largest `alpha` in `{0.01, 0.02, ..., 1.00}` at which the mechanism is
    /// DP; `None` if it fails even at 0.01.
    pub dp_alpha_max: Option<f64>,
    /// `None` when `n = 0`.
    pub l0: Option<f64>,
    /// Tail scores for `d = 1..=n`.
    pub l0d: BTreeMap<usize, f64>,
}

impl PropertyReport {
    pub fn has(&self, p: Property) -> bool {
        self.properties.contains(p)
    }
}

pub const DP_GRID_STEPS: u32 = 100;

pub fn property_report(m: &Mechanism) -> PropertyReport {
    property_report_with_tolerance(m, EPS_TOL)
}

pub fn property_report_with_tolerance(m: &Mechanism, tol: f64) -> PropertyReport {
    // DP at alpha implies DP at every smaller alpha, so scan downwards
    let dp_alpha_max = (1..=DP_GRID_STEPS)
        .rev()
        .map(|k| k as f64 / DP_GRID_STEPS as f64)
        .find(|&a| m.is_dp(PrivacyLevel::new(a).expect("grid lies in (0, 1]"), tol));
    let l0d = (1..=m.n())
        .filter_map(|d| l0d_score(m, d).ok().map(|v| (d, v)))
        .collect();
    PropertyReport {
        properties: satisfied(m, tol),
        dp_alpha_max,
        l0: l0_score(m).ok(),
        l0d,
    }
}
