//! Monte Carlo evaluation: sampling outputs from a mechanism, generating or
//! grouping true counts, and the empirical error metrics.

mod data;
mod metrics;
mod rng;
mod sampling;

pub use data::{binomial_population, GroupCounts};
pub use metrics::{empirical_l0d, empirical_rmse, evaluate, EvalConfig, EvalResult, Metric};
pub use rng::{mix64, rep_rng, EvalRng};
pub use sampling::{sample_output, ColumnSampler};
