//! Argument definitions and the five subcommands.
//!
//! Every command returns a single JSON document for standard output. Failures
//! map to exit codes: 2 for bad flags or unreadable mechanism files, 1 for
//! solver failures and write errors, 3 for problems with evaluation data.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dpmech_core::eval::rep_rng;
use dpmech_core::{
    binomial_population, build_lp, design_mechanism, evaluate, explicit_fair, geometric, objective_value,
    select_strategy, uniform, ConstraintSet, Error, EvalConfig, GroupCounts, Mechanism, Metric, Objective,
    PrivacyLevel,
};
use serde_json::{json, Value};

use crate::format::{read_mechanism_with_tolerance, write_heatmap, write_mechanism, MechanismFile};
use crate::ingest::{ingest_groups, BitSource, Predicate};
use crate::report::{eval_json, property_json, selection_json};

/// Environment variable overriding the predicate tolerance.
pub const TOL_ENV: &str = "DPMECH_TOL";

/// RNG stream reserved for generating synthetic populations, kept apart from
/// the per-repetition sampling streams `0..reps`.
const POPULATION_STREAM: u64 = u64::MAX;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) | CliError::Output(_) => 1,
            CliError::Data(_) => 3,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn data(e: impl ToString) -> CliError {
    CliError::Data(e.to_string())
}

fn output(path: &Path, e: impl ToString) -> CliError {
    CliError::Output(format!("{}: {}", path.display(), e.to_string()))
}

#[derive(Debug, Parser)]
#[command(name = "dpmech", version, about = "Design, analyze and evaluate differentially private count mechanisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a mechanism from the LP or a closed form and write it as CSV.
    Design(DesignArgs),
    /// Report the structural properties and scores of a mechanism file.
    Analyze(AnalyzeArgs),
    /// Pick how to obtain an L0-optimal mechanism for a property set.
    Select(SelectArgs),
    /// Measure empirical error of a mechanism on synthetic or CSV data.
    Evaluate(EvaluateArgs),
    /// Write a mechanism as long-form `input,output,probability` CSV.
    ExportHeatmap(HeatmapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MechanismKind {
    Lp,
    Gm,
    Em,
    Um,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveKind {
    L0,
    L1,
    L2,
    L0d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataKind {
    Binomial,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    L0d,
    Rmse,
}

fn parse_alpha(s: &str) -> Result<PrivacyLevel, String> {
    let a: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    PrivacyLevel::new(a).map_err(|e| e.to_string())
}

fn parse_props(s: &str) -> Result<ConstraintSet, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_probability(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(p) if (0.0..=1.0).contains(&p) => Ok(p),
        _ => Err(format!("`{s}` is not a probability in [0, 1]")),
    }
}

fn parse_predicate(s: &str) -> Result<Predicate, String> {
    s.parse().map_err(|e: crate::ingest::IngestError| e.to_string())
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Group size.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Privacy level in (0, 1]; optional only for `--mechanism um`.
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<PrivacyLevel>,
    /// Comma-separated properties (RH, RM, CH, CM, F, WH, S, all, none,
    /// wm-weak, wm-column). Only the LP enforces them.
    #[arg(long, value_parser = parse_props, default_value = "none")]
    pub props: ConstraintSet,
    #[arg(long, value_enum, default_value = "l0")]
    pub objective: ObjectiveKind,
    /// Tail offset for `--objective l0d`.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// `uniform`, or a file of n+1 non-negative numbers that is normalised to sum 1.
    #[arg(long, default_value = "uniform")]
    pub weights: String,
    #[arg(long, value_enum, default_value = "lp")]
    pub mechanism: MechanismKind,
    /// Where to write the mechanism CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the LP in plain text (one constraint per line) to this path.
    #[arg(long)]
    pub dump_lp: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Privacy level for the DP and derivability checks; defaults to the file header.
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<PrivacyLevel>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: PrivacyLevel,
    #[arg(long, value_parser = parse_props, default_value = "none")]
    pub props: ConstraintSet,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub mech: PathBuf,
    #[arg(long, value_enum, default_value = "binomial")]
    pub data: DataKind,
    /// Success probability for binomial data.
    #[arg(long, value_parser = parse_probability)]
    pub p: Option<f64>,
    /// Population size for binomial data.
    #[arg(long, default_value_t = 10_000)]
    pub total: usize,
    /// Rows per group; defaults to the mechanism's n and must match it.
    #[arg(long)]
    pub group_size: Option<usize>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Row-to-bit mapping for CSV data, e.g. `age<30` or `sex==Female`.
    #[arg(long, value_parser = parse_predicate, conflicts_with = "column")]
    pub predicate: Option<Predicate>,
    /// A 0/1 column to read bits from directly.
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, value_enum, default_value = "l0d")]
    pub metric: MetricKind,
    /// Errors count when the output is more than d steps from the truth.
    #[arg(long, default_value_t = 0)]
    pub d: usize,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// Reads the tolerance override, falling back to the library default.
pub fn tolerance_from_env() -> Result<f64, CliError> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(dpmech_core::EPS_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t >= 0.0 && t.is_finite() => Ok(t),
            _ => Err(usage(format!("{TOL_ENV}=`{s}` is not a non-negative number"))),
        },
    }
}

pub fn run(cli: Cli, tol: f64) -> Result<Value, CliError> {
    match cli.command {
        Command::Design(a) => design(a, tol),
        Command::Analyze(a) => analyze(a, tol),
        Command::Select(a) => Ok(selection_json(&select_strategy(a.n as usize, a.alpha, a.props))),
        Command::Evaluate(a) => evaluate_cmd(a, tol),
        Command::ExportHeatmap(a) => heatmap(a, tol),
    }
}

fn load_mechanism(path: &Path, tol: f64) -> Result<MechanismFile, CliError> {
    let file = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    read_mechanism_with_tolerance(file, tol).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_weights(source: &str, n: usize) -> Result<Vec<f64>, CliError> {
    if source == "uniform" {
        return Ok(Objective::uniform_weights(n));
    }
    let text = fs::read_to_string(source).map_err(|e| usage(format!("{source}: {e}")))?;
    let raw = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| usage(format!("{source}: `{t}` is not a number"))))
        .collect::<Result<Vec<_>, _>>()?;
    if raw.len() != n + 1 {
        return Err(usage(format!("{source}: expected {} weights, found {}", n + 1, raw.len())));
    }
    let total: f64 = raw.iter().sum();
    if raw.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) || !(total > 0.0) {
        return Err(usage(format!("{source}: weights must be non-negative with a positive sum")));
    }
    Ok(raw.into_iter().map(|w| w / total).collect())
}

fn build_objective(a: &DesignArgs, n: usize) -> Result<Objective, CliError> {
    let obj = match a.objective {
        ObjectiveKind::L0 => Objective::l0(n),
        ObjectiveKind::L0d => Objective::l0d(n, a.d).map_err(usage)?,
        ObjectiveKind::L1 => Objective::lp_norm(n, 1),
        ObjectiveKind::L2 => Objective::lp_norm(n, 2),
    };
    obj.with_weights(load_weights(&a.weights, n)?).map_err(usage)
}

fn require_alpha(a: &DesignArgs) -> Result<PrivacyLevel, CliError> {
    a.alpha.ok_or_else(|| usage("--alpha is required for this mechanism"))
}

fn design(a: DesignArgs, tol: f64) -> Result<Value, CliError> {
    let n = a.n as usize;
    let obj = build_objective(&a, n)?;
    if a.mechanism != MechanismKind::Lp && !a.props.is_empty() {
        eprintln!("note: --props is only enforced by the LP; reporting what the closed form satisfies");
    }
    if a.dump_lp.is_some() && a.mechanism != MechanismKind::Lp {
        return Err(usage("--dump-lp needs --mechanism lp"));
    }
    let m = match a.mechanism {
        MechanismKind::Gm => geometric(n, require_alpha(&a)?).map_err(usage)?,
        MechanismKind::Em => explicit_fair(n, require_alpha(&a)?).map_err(usage)?,
        MechanismKind::Um => uniform(n),
        MechanismKind::Lp => {
            let alpha = require_alpha(&a)?;
            if let Some(path) = &a.dump_lp {
                let lp = build_lp(n, alpha, a.props, &obj).map_err(usage)?;
                fs::write(path, lp.to_string()).map_err(|e| output(path, e))?;
            }
            design_mechanism(n, alpha, a.props, &obj).map_err(|e| match e {
                Error::Solver(_) | Error::NumericalInstability | Error::Verification(_) => {
                    CliError::Solver(e.to_string())
                }
                other => usage(other),
            })?
        }
    };
    if let Some(path) = &a.out {
        let file = File::create(path).map_err(|e| output(path, e))?;
        write_mechanism(BufWriter::new(file), &m, a.alpha).map_err(|e| output(path, e))?;
    }
    let value = objective_value(&m, &obj).map_err(usage)?;
    Ok(json!({
        "mechanism": format!("{:?}", a.mechanism).to_lowercase(),
        "n": n,
        "alpha": a.alpha.map(PrivacyLevel::get),
        "props": a.props.to_string(),
        "objective": value,
        "out": a.out.as_ref().map(|p| p.display().to_string()),
        "report": property_json(&m, a.alpha, tol),
    }))
}

fn analyze(a: AnalyzeArgs, tol: f64) -> Result<Value, CliError> {
    let file = load_mechanism(&a.input, tol)?;
    Ok(property_json(&file.mechanism, a.alpha.or(file.alpha), tol))
}

fn load_groups(a: &EvaluateArgs, m: &Mechanism) -> Result<GroupCounts, CliError> {
    let group_size = a.group_size.unwrap_or(m.n());
    if group_size != m.n() {
        return Err(data(format!("group size {group_size} does not match mechanism n = {}", m.n())));
    }
    match a.data {
        DataKind::Binomial => {
            let p = a.p.ok_or_else(|| usage("--p is required for binomial data"))?;
            let mut rng = rep_rng(a.seed, POPULATION_STREAM);
            binomial_population(a.total, group_size, p, &mut rng).map_err(data)
        }
        DataKind::Csv => {
            let path = a.csv.as_ref().ok_or_else(|| usage("--csv is required for csv data"))?;
            let source = match (&a.predicate, &a.column) {
                (Some(p), None) => BitSource::Predicate(p.clone()),
                (None, Some(c)) => BitSource::Column(c.clone()),
                _ => return Err(usage("csv data needs exactly one of --predicate or --column")),
            };
            let file = File::open(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
            ingest_groups(file, &source, group_size).map_err(|e| data(format!("{}: {e}", path.display())))
        }
    }
}

fn evaluate_cmd(a: EvaluateArgs, tol: f64) -> Result<Value, CliError> {
    let m = load_mechanism(&a.mech, tol)?.mechanism;
    let metric = match a.metric {
        MetricKind::L0d => Metric::L0dError,
        MetricKind::Rmse => Metric::Rmse,
    };
    let cfg = EvalConfig::new(a.reps as usize, a.seed, a.d, metric).map_err(usage)?;
    let groups = load_groups(&a, &m)?;
    if groups.is_empty() {
        return Err(data("no complete group in the data"));
    }
    let result = evaluate(&m, &groups, &cfg).map_err(data)?;
    Ok(eval_json(&result))
}

fn heatmap(a: HeatmapArgs, tol: f64) -> Result<Value, CliError> {
    let m = load_mechanism(&a.input, tol)?.mechanism;
    let file = File::create(&a.out).map_err(|e| output(&a.out, e))?;
    write_heatmap(BufWriter::new(file), &m).map_err(|e| output(&a.out, e))?;
    Ok(json!({ "out": a.out.display().to_string(), "rows": m.dim() * m.dim() }))
}
