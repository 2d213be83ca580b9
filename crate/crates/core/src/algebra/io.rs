//! CSV layouts.
//!
//! A single matrix element is n rows of n decimals; series, scalar and
//! null-product elements are one row. Sequence files hold one element per
//! row with all coordinates flattened row-major.

use std::io::Read;

use super::{AlgebraElement, ModelKind};
use crate::error::{Error, Result};

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r)
}

fn parse_row(record: &csv::StringRecord, line: usize) -> Result<Vec<f64>> {
    record
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| {
            c.parse::<f64>()
                .map_err(|_| Error::Configuration(format!("line {line}: cannot parse {c:?}")))
        })
        .collect()
}

impl AlgebraElement {
    pub fn from_csv_reader<R: Read>(model: ModelKind, r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, rec) in reader(r).records().enumerate() {
            let row = parse_row(&rec?, i + 1)?;
            if !row.is_empty() {
                rows.push(row);
            }
        }
        match model {
            ModelKind::Matrix { n } => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Configuration(format!(
                        "{model} CSV must be {n} rows of {n} values"
                    )));
                }
                AlgebraElement::new(model, rows.concat())
            }
            _ => {
                if rows.len() != 1 {
                    return Err(Error::Configuration(format!(
                        "{model} CSV must be a single row, found {} rows",
                        rows.len()
                    )));
                }
                AlgebraElement::new(model, rows.pop().unwrap())
            }
        }
    }

    pub fn to_csv_string(&self) -> String {
        let row = |vals: &[f64]| {
            vals.iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        match self.model {
            ModelKind::Matrix { n } => self.data.chunks(n).map(|r| row(r) + "\n").collect(),
            _ => row(&self.data) + "\n",
        }
    }
}

/// Reads a sequence file: one flattened element per non-empty row.
pub fn elements_from_csv<R: Read>(model: ModelKind, r: R) -> Result<Vec<AlgebraElement>> {
    let mut out = Vec::new();
    for (i, rec) in reader(r).records().enumerate() {
        let row = parse_row(&rec?, i + 1)?;
        if row.is_empty() {
            continue;
        }
        if row.len() != model.dim() {
            return Err(Error::Configuration(format!(
                "line {}: {model} rows need {} values, found {}",
                i + 1,
                model.dim(),
                row.len()
            )));
        }
        out.push(AlgebraElement::new(model, row)?);
    }
    Ok(out)
}

pub fn elements_to_csv(elements: &[AlgebraElement]) -> String {
    elements
        .iter()
        .map(|e| {
            e.data
                .iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join(",")
                + "\n"
        })
        .collect()
}
