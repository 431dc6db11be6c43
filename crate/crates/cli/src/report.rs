//! JSON renderings of the library's result types.

use dpmech_core::{
    gm_derivable, property_report_with_tolerance, EvalResult, Mechanism, PrivacyLevel, Property, SelectionResult,
};
use serde_json::{json, Map, Value};

/// Flat property report: the seven flags, `dp_alpha_max`, `l0` and
/// `l0d.<d>`. With a privacy level it also carries `dp`, `dp_tight` and
/// `gm_derivable` at that level.
pub fn property_json(m: &Mechanism, alpha: Option<PrivacyLevel>, tol: f64) -> Value {
    let report = property_report_with_tolerance(m, tol);
    let mut obj = Map::new();
    obj.insert("n".into(), json!(m.n()));
    for p in Property::ALL {
        obj.insert(p.abbrev().into(), json!(report.has(p)));
    }
    obj.insert("dp_alpha_max".into(), json!(report.dp_alpha_max));
    obj.insert("l0".into(), json!(report.l0));
    for (d, v) in &report.l0d {
        obj.insert(format!("l0d.{d}"), json!(v));
    }
    if let Some(a) = alpha {
        obj.insert("alpha".into(), json!(a.get()));
        obj.insert("dp".into(), json!(m.is_dp(a, tol)));
        obj.insert("dp_tight".into(), json!(m.is_dp_tight(a, tol)));
        obj.insert("gm_derivable".into(), json!(gm_derivable(m, a, tol)));
    }
    Value::Object(obj)
}

pub fn eval_json(r: &EvalResult) -> Value {
    json!({ "mean": r.mean, "std_error": r.std_error, "per_rep": r.per_rep })
}

pub fn selection_json(s: &SelectionResult) -> Value {
    json!({
        "strategy": s.strategy.name(),
        "rationale": s.rationale,
        "lp_properties": s.strategy.lp_properties().map(|p| p.to_string()),
    })
}
