//! Turning a tabular CSV into per-group counts.
//!
//! Each row contributes one bit, either read directly from a 0/1 column or
//! computed by a predicate such as `age<30` or `sex==Female`. Consecutive rows
//! form groups in file order and an incomplete trailing group is dropped.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use dpmech_core::GroupCounts;

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    /// `row` counts data rows from 1, excluding the header.
    #[error("row {row}: {msg}")]
    Parse { row: usize, msg: String },
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("bad predicate `{0}`: expected <column><op><value> with op one of <, <=, ==, >=, >")]
    BadPredicate(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] dpmech_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Op {
    fn symbol(self) -> &'static str {
        match self {
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Eq => "==",
            Op::Ge => ">=",
            Op::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub column: String,
    pub op: Op,
    pub value: Operand,
}

impl FromStr for Predicate {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IngestError::BadPredicate(s.to_string());
        let at = s.find(['<', '>', '=']).ok_or_else(bad)?;
        let (column, rest) = s.split_at(at);
        // two-character operators first so `<=` is not read as `<`
        let (op, value) = [("<=", Op::Le), (">=", Op::Ge), ("==", Op::Eq), ("<", Op::Lt), (">", Op::Gt)]
            .into_iter()
            .find_map(|(sym, op)| rest.strip_prefix(sym).map(|v| (op, v)))
            .ok_or_else(bad)?;
        let (column, value) = (column.trim(), value.trim());
        if column.is_empty() || value.is_empty() || value.starts_with(['<', '>', '=']) {
            return Err(bad());
        }
        let value = match value.parse::<f64>() {
            Ok(x) => Operand::Number(x),
            Err(_) if op == Op::Eq => Operand::Text(value.to_string()),
            Err(_) => return Err(bad()),
        };
        Ok(Predicate {
            column: column.to_string(),
            op,
            value,
        })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.column, self.op.symbol())?;
        match &self.value {
            Operand::Number(x) => write!(f, "{x}"),
            Operand::Text(t) => f.write_str(t),
        }
    }
}

impl Predicate {
    /// Evaluates the predicate on one cell. Numeric comparisons need the cell
    /// to parse as a number; `==` against text compares trimmed strings.
    pub fn eval(&self, cell: &str) -> Result<bool, String> {
        let cell = cell.trim();
        match &self.value {
            Operand::Text(t) => Ok(cell == t),
            Operand::Number(x) => {
                let v: f64 = cell.parse().map_err(|_| format!("`{cell}` in column `{}` is not a number", self.column))?;
                Ok(match self.op {
                    Op::Lt => v < *x,
                    Op::Le => v <= *x,
                    Op::Eq => v == *x,
                    Op::Ge => v >= *x,
                    Op::Gt => v > *x,
                })
            }
        }
    }
}

/// How each row is reduced to a bit.
#[derive(Debug, Clone, PartialEq)]
pub enum BitSource {
    /// The column holds `0` or `1`.
    Column(String),
    Predicate(Predicate),
}

impl BitSource {
    fn column(&self) -> &str {
        match self {
            BitSource::Column(c) => c,
            BitSource::Predicate(p) => &p.column,
        }
    }

    fn bit(&self, cell: &str) -> Result<bool, String> {
        match self {
            BitSource::Predicate(p) => p.eval(cell),
            BitSource::Column(c) => match cell.trim() {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(format!("`{other}` in column `{c}` is not 0 or 1")),
            },
        }
    }
}

pub fn ingest_groups<R: Read>(input: R, source: &BitSource, group_size: usize) -> Result<GroupCounts, IngestError> {
    if group_size == 0 {
        return Err(dpmech_core::Error::InvalidGroupSize(0).into());
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let name = source.column();
    let idx = rdr
        .headers()?
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| IngestError::UnknownColumn(name.to_string()))?;
    let mut bits = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let row = k + 1;
        let rec = rec.map_err(|e| IngestError::Parse { row, msg: e.to_string() })?;
        let cell = rec.get(idx).ok_or_else(|| IngestError::Parse {
            row,
            msg: format!("missing column `{name}`"),
        })?;
        bits.push(source.bit(cell).map_err(|msg| IngestError::Parse { row, msg })?);
    }
    Ok(GroupCounts::from_bits(&bits, group_size)?)
}
