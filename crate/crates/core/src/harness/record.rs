//! Validation records and the deterministic flat-file formats they are
//! written in.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How `observed` is judged against `expected`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Tolerance {
    /// `|observed - expected| ≤ tol`.
    Absolute { tol: f64 },
    /// `|observed - expected| ≤ tol·|expected|`.
    Relative { tol: f64 },
    /// `|observed - expected| ≤ k·stderr`.
    Sigma { k: f64, stderr: f64 },
    /// `observed ≤ max` (residuals; `expected` is the ideal value).
    AtMost { max: f64 },
    /// `observed ≥ min` (p-values).
    AtLeast { min: f64 },
}

impl Tolerance {
    pub fn accepts(&self, expected: f64, observed: f64) -> bool {
        let d = (observed - expected).abs();
        match *self {
            Tolerance::Absolute { tol } => d <= tol,
            Tolerance::Relative { tol } => d <= tol * expected.abs(),
            Tolerance::Sigma { k, stderr } => d <= k * stderr,
            Tolerance::AtMost { max } => observed <= max,
            Tolerance::AtLeast { min } => observed >= min,
        }
    }

    /// Loosen by `scale` (tighten for `scale < 1`).
    pub fn scaled(self, scale: f64) -> Tolerance {
        match self {
            Tolerance::Absolute { tol } => Tolerance::Absolute { tol: tol * scale },
            Tolerance::Relative { tol } => Tolerance::Relative { tol: tol * scale },
            Tolerance::Sigma { k, stderr } => Tolerance::Sigma {
                k: k * scale,
                stderr,
            },
            Tolerance::AtMost { max } => Tolerance::AtMost { max: max * scale },
            Tolerance::AtLeast { min } => Tolerance::AtLeast { min: min / scale },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Tolerance::Absolute { .. } => "absolute",
            Tolerance::Relative { .. } => "relative",
            Tolerance::Sigma { .. } => "sigma",
            Tolerance::AtMost { .. } => "at-most",
            Tolerance::AtLeast { .. } => "at-least",
        }
    }

    fn bound(&self) -> f64 {
        match *self {
            Tolerance::Absolute { tol } | Tolerance::Relative { tol } => tol,
            Tolerance::Sigma { k, stderr } => k * stderr,
            Tolerance::AtMost { max } => max,
            Tolerance::AtLeast { min } => min,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One executed check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub id: String,
    /// Acceptance group the check belongs to.
    pub group: String,
    /// Which identity of the theory is being checked, in words.
    pub anchor: String,
    pub inputs: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: Tolerance,
    pub status: Status,
    /// Error text when the check could not be evaluated.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    /// Wall-clock seconds; kept out of the deterministic outputs.
    #[serde(skip)]
    pub runtime: f64,
}

impl ValidationRecord {
    pub fn new(
        id: &str,
        group: &str,
        anchor: &str,
        inputs: String,
        expected: f64,
        observed: f64,
        tolerance: Tolerance,
    ) -> Self {
        let status = if observed.is_nan() || !tolerance.accepts(expected, observed) {
            Status::Fail
        } else {
            Status::Pass
        };
        ValidationRecord {
            id: id.into(),
            group: group.into(),
            anchor: anchor.into(),
            inputs,
            expected,
            observed,
            tolerance,
            status,
            note: String::new(),
            runtime: 0.0,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(id: &str, group: &str, anchor: &str, inputs: String, err: &Error) -> Self {
        let mut r = Self::new(
            id,
            group,
            anchor,
            inputs,
            f64::NAN,
            f64::NAN,
            Tolerance::AtMost { max: 0.0 },
        );
        r.status = Status::Fail;
        r.note = err.to_string();
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Float with 17 significant digits; `inf`/`-inf`, and NaN as empty.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.into()
    }
}

/// Records as CSV with a fixed column order and no runtimes.
pub fn records_csv(records: &[ValidationRecord]) -> String {
    let mut out = String::from(
        "id,group,anchor,inputs,expected,observed,tolerance_kind,tolerance,status,note\n",
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.id),
            csv_field(&r.group),
            csv_field(&r.anchor),
            csv_field(&r.inputs),
            fmt_f64(r.expected),
            fmt_f64(r.observed),
            r.tolerance.kind(),
            fmt_f64(r.tolerance.bound()),
            if r.passed() { "pass" } else { "fail" },
            csv_field(&r.note),
        );
    }
    out
}

/// A numeric table with named columns (the plot input format).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    /// Parse a CSV with a header; non-numeric cells (and empty ones) become NaN.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty table".into()))?;
        let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (i, l) in lines.enumerate() {
            let cells: Vec<f64> = l
                .split(',')
                .map(|c| match c.trim() {
                    "inf" => f64::INFINITY,
                    "-inf" => f64::NEG_INFINITY,
                    c => c.parse().unwrap_or(f64::NAN),
                })
                .collect();
            if cells.len() < columns.len() {
                return Err(Error::Config(format!(
                    "row {} has {} cells, header has {}",
                    i + 1,
                    cells.len(),
                    columns.len()
                )));
            }
            rows.push(cells[..columns.len()].to_vec());
        }
        Ok(Table { columns, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}
