//! Matrix files.
//!
//! Text: a header line `m n mode` followed by `m` lines of `n` entries.
//! JSON: `{"rows": m, "cols": n, "mode": "float"|"rational", "entries": [[…]]}`
//! where entries are numbers or strings such as `"3/7"`.

use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Matrix, Mode, Scalar};
use crate::error::{Error, Result};
use crate::numerics::format_rational;

/// A matrix in whichever mode its source declared.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Float(Matrix<f64>),
    Rational(Matrix<BigRational>),
}

impl AnyMatrix {
    pub fn mode(&self) -> Mode {
        match self {
            AnyMatrix::Float(_) => Mode::Float,
            AnyMatrix::Rational(_) => Mode::Rational,
        }
    }

    /// Converts to the requested mode. Float to rational is exact in the
    /// binary value.
    pub fn into_mode(self, mode: Mode) -> Result<AnyMatrix> {
        Ok(match (self, mode) {
            (AnyMatrix::Float(m), Mode::Rational) => AnyMatrix::Rational(Matrix::from_f64(&m)?),
            (AnyMatrix::Rational(m), Mode::Float) => AnyMatrix::Float(m.to_f64()),
            (same, _) => same,
        })
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        match self {
            AnyMatrix::Float(m) => m.clone(),
            AnyMatrix::Rational(m) => m.to_f64(),
        }
    }
}

#[derive(Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    #[serde(default)]
    mode: Option<String>,
    entries: Vec<Vec<Value>>,
}

#[derive(Serialize)]
struct JsonMatrixOut {
    rows: usize,
    cols: usize,
    mode: String,
    entries: Vec<Vec<Value>>,
}

fn build<T: Scalar>(rows: usize, cols: usize, cells: Vec<Vec<String>>) -> Result<Matrix<T>> {
    if cells.len() != rows {
        return Err(Error::Malformed(format!("expected {rows} rows, found {}", cells.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in cells.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Malformed(format!("row {} has {} entries, expected {cols}", i + 1, row.len())));
        }
        for cell in row {
            data.push(T::parse(cell)?);
        }
    }
    Matrix::new(rows, cols, data)
}

fn build_any(rows: usize, cols: usize, mode: Mode, cells: Vec<Vec<String>>) -> Result<AnyMatrix> {
    Ok(match mode {
        Mode::Float => AnyMatrix::Float(build(rows, cols, cells)?),
        Mode::Rational => AnyMatrix::Rational(build(rows, cols, cells)?),
    })
}

fn parse_text(s: &str) -> Result<AnyMatrix> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Malformed("empty matrix file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (rows, cols, mode) = match fields.as_slice() {
        [m, n] => (m, n, Mode::Float),
        [m, n, mode] => (m, n, mode.parse()?),
        _ => return Err(Error::Malformed(format!("bad header {header:?}, expected \"m n mode\""))),
    };
    let dim = |s: &str| s.parse::<usize>().map_err(|_| Error::Malformed(format!("bad dimension {s:?}")));
    let (rows, cols) = (dim(rows)?, dim(cols)?);
    let cells = lines.map(|l| l.split_whitespace().map(String::from).collect()).collect();
    build_any(rows, cols, mode, cells)
}

fn parse_json(s: &str) -> Result<AnyMatrix> {
    let raw: JsonMatrix = serde_json::from_str(s).map_err(|e| Error::Malformed(format!("matrix JSON: {e}")))?;
    let mode = match raw.mode.as_deref() {
        Some(m) => m.parse()?,
        None => Mode::Float,
    };
    let cells = raw
        .entries
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s),
                    Value::Number(n) => Ok(n.to_string()),
                    other => Err(Error::Malformed(format!("bad matrix entry {other}"))),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    build_any(raw.rows, raw.cols, mode, cells)
}

/// Parses either format, chosen by the first non-blank character.
pub fn parse_matrix(s: &str) -> Result<AnyMatrix> {
    if s.trim_start().starts_with('{') {
        parse_json(s)
    } else {
        parse_text(s)
    }
}

pub fn read_matrix_file(path: &Path) -> Result<AnyMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text)
}

fn json_entry<T: Scalar>(v: &T) -> Value {
    match T::MODE {
        Mode::Float => serde_json::Number::from_f64(v.to_f64()).map_or(Value::Null, Value::Number),
        Mode::Rational => Value::String(format_rational(&v.to_rational().expect("rational entry"))),
    }
}

impl<T: Scalar> Matrix<T> {
    /// The text file format. Floats are written in shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows(), self.cols(), T::MODE);
        for i in 0..self.rows() {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|v| match T::MODE {
                    Mode::Float => format!("{:?}", v.to_f64()),
                    Mode::Rational => format_rational(&v.to_rational().expect("rational entry")),
                })
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let entries = (0..self.rows()).map(|i| self.row(i).iter().map(json_entry).collect()).collect();
        serde_json::to_value(JsonMatrixOut {
            rows: self.rows(),
            cols: self.cols(),
            mode: T::MODE.to_string(),
            entries,
        })
        .expect("matrix JSON")
    }
}
