use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fmt::sig17;
use crate::netpbm::write_file;

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub sweep: f64,
    pub method: String,
    pub mean: f64,
    pub std: f64,
}

/// Experiment output: one row per (sweep value, method), sweep-major.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveTable {
    pub rows: Vec<CurveRow>,
}

impl CurveTable {
    pub fn push(&mut self, sweep: f64, method: impl Into<String>, mean: f64, std: f64) {
        self.rows.push(CurveRow {
            sweep,
            method: method.into(),
            mean,
            std,
        });
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Method labels in first-seen order.
    pub fn methods(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.method.as_str()) {
                out.push(&r.method);
            }
        }
        out
    }

    /// Mean values of one method, in sweep order.
    pub fn curve(&self, method: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.mean)
            .collect()
    }

    /// `(sweep, mean, std)` triples of one method.
    pub fn series(&self, method: &str) -> Vec<(f64, f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| (r.sweep, r.mean, r.std))
            .collect()
    }

    pub fn sweep_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.rows {
            if out.last() != Some(&r.sweep) {
                out.push(r.sweep);
            }
        }
        out
    }

    pub fn get(&self, sweep: f64, method: &str) -> Option<&CurveRow> {
        self.rows
            .iter()
            .find(|r| r.sweep == sweep && r.method == method)
    }
}

/// Writes `sweep,method,mean,std` CSV with 17-significant-digit numbers.
pub fn write_csv<W: Write>(table: &CurveTable, mut w: W) -> Result<()> {
    if table.is_empty() {
        return Err(Error::InvalidParam(
            "refusing to write an empty table".into(),
        ));
    }
    writeln!(w, "sweep,method,mean,std")?;
    for r in &table.rows {
        writeln!(
            w,
            "{},{},{},{}",
            sig17(r.sweep),
            r.method,
            sig17(r.mean),
            sig17(r.std)
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(table: &CurveTable, path: impl AsRef<Path>) -> Result<()> {
    write_file(path, |w| write_csv(table, w))
}
