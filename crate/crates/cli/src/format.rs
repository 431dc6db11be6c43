//! The mechanism CSV format and the long-form heatmap export.
//!
//! A mechanism file starts with `n,alpha` (`alpha` may be `NA`), followed by
//! `n + 1` rows of `n + 1` probabilities. Row index is the output, column index
//! the input. Values are written with 17 significant digits so they read back
//! bit-exactly.

use std::io::{Read, Write};

use dpmech_core::{Mechanism, PrivacyLevel, EPS_TOL};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid mechanism: {0}")]
    Invalid(#[from] dpmech_core::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// A mechanism together with the privacy level recorded in its header.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismFile {
    pub mechanism: Mechanism,
    pub alpha: Option<PrivacyLevel>,
}

pub fn write_mechanism<W: Write>(out: W, m: &Mechanism, alpha: Option<PrivacyLevel>) -> Result<(), FormatError> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    let header = match alpha {
        Some(a) => format!("{:.16e}", a.get()),
        None => "NA".to_string(),
    };
    w.write_record([m.n().to_string(), header])?;
    for i in 0..m.dim() {
        w.write_record(m.row(i).iter().map(|p| format!("{p:.16e}")))?;
    }
    w.flush()?;
    Ok(())
}

pub fn mechanism_to_string(m: &Mechanism, alpha: Option<PrivacyLevel>) -> String {
    let mut buf = Vec::new();
    write_mechanism(&mut buf, m, alpha).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is ASCII")
}

pub fn read_mechanism<R: Read>(input: R) -> Result<MechanismFile, FormatError> {
    read_mechanism_with_tolerance(input, EPS_TOL)
}

pub fn read_mechanism_with_tolerance<R: Read>(input: R, tol: f64) -> Result<MechanismFile, FormatError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = rdr.records();
    let header = records.next().ok_or_else(|| parse_err(1, "empty file"))??;
    if header.len() != 2 {
        return Err(parse_err(1, "header must be `n,alpha`"));
    }
    let n: usize = header[0].parse().map_err(|_| parse_err(1, format!("bad n `{}`", &header[0])))?;
    let alpha = match &header[1] {
        "NA" => None,
        s => {
            let a: f64 = s.parse().map_err(|_| parse_err(1, format!("bad alpha `{s}`")))?;
            Some(PrivacyLevel::new(a).map_err(|e| parse_err(1, e.to_string()))?)
        }
    };

    let mut rows = Vec::with_capacity(n + 1);
    for (k, rec) in records.enumerate() {
        let line = k + 2;
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rows.len() == n + 1 {
            return Err(parse_err(line, format!("more than {} rows", n + 1)));
        }
        if rec.len() != n + 1 {
            return Err(parse_err(line, format!("expected {} values, found {}", n + 1, rec.len())));
        }
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| parse_err(line, format!("bad probability `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() != n + 1 {
        return Err(parse_err(rows.len() + 2, format!("expected {} rows, found {}", n + 1, rows.len())));
    }
    let mechanism = Mechanism::with_tolerance(n, rows, tol)?;
    Ok(MechanismFile { mechanism, alpha })
}

/// Writes `input,output,probability` with one line per cell, inputs outermost.
pub fn write_heatmap<W: Write>(out: W, m: &Mechanism) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["input", "output", "probability"])?;
    for j in 0..m.dim() {
        for i in 0..m.dim() {
            w.write_record([j.to_string(), i.to_string(), format!("{:.16e}", m.get(i, j))])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use dpmech_core::{explicit_fair, geometric, uniform};

    fn alpha(a: f64) -> PrivacyLevel {
        PrivacyLevel::new(a).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        for m in [geometric(5, alpha(0.62)).unwrap(), explicit_fair(4, alpha(10.0 / 11.0)).unwrap(), uniform(3)] {
            let text = mechanism_to_string(&m, Some(alpha(0.62)));
            let back = read_mechanism(text.as_bytes()).unwrap();
            assert_eq!(back.mechanism, m);
            assert_eq!(back.alpha, Some(alpha(0.62)));
        }
    }

    #[test]
    fn header_and_digits() {
        let text = mechanism_to_string(&geometric(2, alpha(0.9)).unwrap(), None);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("2,NA"));
        let first = lines.next().unwrap().split(',').next().unwrap().to_string();
        let mantissa = first.split('e').next().unwrap().replace('.', "");
        assert!(mantissa.len() >= 15);
        assert!(read_mechanism(text.as_bytes()).unwrap().alpha.is_none());
    }

    #[test]
    fn rejects_malformed_files() {
        let cases = [
            "",
            "2\n",
            "x,NA\n",
            "1,2.0\n0.5,0.5\n0.5,0.5\n",
            "1,NA\n0.5,0.5\n",
            "1,NA\n0.5,0.5\n0.5\n",
            "1,NA\n0.5,abc\n0.5,0.5\n",
            "1,NA\n0.5,0.5\n0.5,0.5\n0.5,0.5\n",
            "1,NA\n0.9,0.5\n0.5,0.5\n",
        ];
        for c in cases {
            assert!(read_mechanism(c.as_bytes()).is_err(), "accepted {c:?}");
        }
        match read_mechanism("1,NA\n0.5,x\n0.5,0.5\n".as_bytes()) {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn heatmap_layout() {
        let mut buf = Vec::new();
        write_heatmap(&mut buf, &uniform(2)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "input,output,probability");
        assert_eq!(lines.len(), 10);
        assert!(lines[2].starts_with("0,1,"));
    }
}
