//! Matrix text and JSON formats.
//!
//! Text: a line holding `N`, then `N` lines of `N` whitespace separated
//! entries. Complex entries are written `re+imj`. Lines starting with `#`
//! are ignored.
//!
//! JSON: `{"n": N, "rows": [[...], ...]}` where a complex entry is the pair
//! `[re, im]`.

use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, RealMatrix};

/// A parsed matrix, real unless some entry carried an imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixData {
    Real(RealMatrix),
    Complex(ComplexMatrix),
}

impl MatrixData {
    pub fn dim(&self) -> usize {
        match self {
            MatrixData::Real(m) => m.nrows(),
            MatrixData::Complex(m) => m.nrows(),
        }
    }

    /// Real view. Complex data is accepted when every imaginary part is zero.
    pub fn into_real(self) -> Result<RealMatrix> {
        match self {
            MatrixData::Real(m) => Ok(m),
            MatrixData::Complex(m) => {
                if m.iter().any(|z| z.im != 0.0) {
                    return Err(Error::Parse("expected a real matrix".into()));
                }
                Ok(m.map(|z| z.re))
            }
        }
    }

    pub fn into_complex(self) -> ComplexMatrix {
        match self {
            MatrixData::Real(m) => m.map(|v| Complex64::new(v, 0.0)),
            MatrixData::Complex(m) => m,
        }
    }
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite)
    }
}

fn parse_token(tok: &str) -> Result<Complex64> {
    let lower = tok.to_ascii_lowercase();
    if lower.contains("nan") || lower.contains("inf") {
        return Err(Error::NonFinite);
    }
    if let Ok(v) = f64::from_str(tok) {
        return Ok(Complex64::new(finite(v)?, 0.0));
    }
    let z = Complex64::from_str(tok).map_err(|_| Error::Parse(format!("bad entry {tok:?}")))?;
    finite(z.re)?;
    finite(z.im)?;
    Ok(z)
}

fn parse_text(s: &str) -> Result<MatrixData> {
    let mut lines = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("first line must be the dimension, got {header:?}")))?;
    if n == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let mut entries = Vec::with_capacity(n * n);
    let mut complex = false;
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != n {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {n}",
                toks.len()
            )));
        }
        for t in toks {
            complex |= t.ends_with('j') || t.ends_with('i');
            entries.push(parse_token(t)?);
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("unexpected trailing line {extra:?}")));
    }
    let m = ComplexMatrix::from_row_slice(n, n, &entries);
    Ok(if complex {
        MatrixData::Complex(m)
    } else {
        MatrixData::Real(m.map(|z| z.re))
    })
}

fn json_number(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Parse(format!("expected a number, got {v}")))
        .and_then(finite)
}

fn parse_json(s: &str) -> Result<MatrixData> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"rows\" array".into()))?;
    let n = rows.len();
    if let Some(declared) = v.get("n") {
        let declared = declared
            .as_u64()
            .ok_or_else(|| Error::Parse("\"n\" must be a positive integer".into()))?;
        if declared as usize != n {
            return Err(Error::DimensionMismatch {
                expected: declared as usize,
                found: n,
            });
        }
    }
    if n == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let mut entries = Vec::with_capacity(n * n);
    let mut complex = false;
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("row {i} is not an array")))?;
        if row.len() != n {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
        }
        for e in row {
            let z = match e {
                Value::Array(pair) if pair.len() == 2 => {
                    complex = true;
                    Complex64::new(json_number(&pair[0])?, json_number(&pair[1])?)
                }
                _ => Complex64::new(json_number(e)?, 0.0),
            };
            entries.push(z);
        }
    }
    let m = ComplexMatrix::from_row_slice(n, n, &entries);
    Ok(if complex {
        MatrixData::Complex(m)
    } else {
        MatrixData::Real(m.map(|z| z.re))
    })
}

/// Parses either format; input whose first non-blank character is `{` is JSON.
pub fn parse_matrix(s: &str) -> Result<MatrixData> {
    if s.trim_start().starts_with('{') {
        parse_json(s)
    } else {
        parse_text(s)
    }
}

pub fn read_real(s: &str) -> Result<RealMatrix> {
    parse_matrix(s)?.into_real()
}

pub fn read_complex(s: &str) -> Result<ComplexMatrix> {
    Ok(parse_matrix(s)?.into_complex())
}

pub fn real_to_text(m: &RealMatrix) -> String {
    let mut out = format!("{}\n", m.nrows());
    for row in m.row_iter() {
        let toks: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn complex_to_text(m: &ComplexMatrix) -> String {
    let mut out = format!("{}\n", m.nrows());
    for row in m.row_iter() {
        let toks: Vec<String> = row.iter().map(|z| format!("{}{:+}j", z.re, z.im)).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn real_to_json(m: &RealMatrix) -> Value {
    let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
    json!({ "n": m.nrows(), "rows": rows })
}

pub fn complex_to_json(m: &ComplexMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
    json!({ "n": m.nrows(), "rows": rows })
}
