//! Result rows, CSV persistence and the JSON summary.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Serialize, Serializer};

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Column order of the results CSV.
pub const RESULT_COLUMNS: [&str; 14] =
    ["experiment_id", "variant", "n", "tau", "seed", "state", "f_c", "E_g", "C_f", "p_avg", "p_pred", "abs_dev", "leaked_weight", "wall_ms"];

/// Column order of the `sweep-fig4` CSV.
pub const CURVE_COLUMNS: [&str; 15] = [
    "series", "variant", "n", "tau", "seed", "state", "measure", "measure_value", "f_c", "E_g", "C_f", "p_avg", "p_pred", "abs_dev", "wall_ms",
];

/// 17 significant digits, `.` decimal, independent of locale.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn sci<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_float(*v))
}

fn sci_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&format_float(*v)),
        None => s.serialize_str(""),
    }
}

fn millis<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:.3}"))
}

/// One run: one initial state under one seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment_id: String,
    pub variant: String,
    pub n: usize,
    pub tau: usize,
    pub seed: u64,
    pub state: String,
    #[serde(serialize_with = "sci")]
    pub f_c: f64,
    #[serde(rename = "E_g", serialize_with = "sci_opt")]
    pub e_g: Option<f64>,
    #[serde(rename = "C_f", serialize_with = "sci_opt")]
    pub c_f: Option<f64>,
    #[serde(serialize_with = "sci")]
    pub p_avg: f64,
    #[serde(serialize_with = "sci")]
    pub p_pred: f64,
    #[serde(serialize_with = "sci")]
    pub abs_dev: f64,
    #[serde(serialize_with = "sci_opt")]
    pub leaked_weight: Option<f64>,
    #[serde(serialize_with = "millis")]
    pub wall_ms: f64,
}

impl ResultRow {
    /// Finite numbers, probabilities within `[0, 1]`.
    pub fn check(&self) -> Result<()> {
        let slack = 1e-12;
        let mut fields = vec![("f_c", self.f_c), ("p_avg", self.p_avg), ("p_pred", self.p_pred), ("abs_dev", self.abs_dev)];
        fields.extend(self.e_g.map(|v| ("E_g", v)));
        fields.extend(self.c_f.map(|v| ("C_f", v)));
        fields.extend(self.leaked_weight.map(|v| ("leaked_weight", v)));
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(HarnessError::invariant("finite values", format!("{name} = {v} in row '{}'", self.state)));
            }
            if !(-slack..=1.0 + slack).contains(&v) {
                return Err(HarnessError::invariant("probability range", format!("{name} = {v} in row '{}'", self.state)));
            }
        }
        Ok(())
    }
}

/// One point of a probability-versus-resource curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub series: String,
    pub variant: String,
    pub n: usize,
    pub tau: usize,
    pub seed: u64,
    pub state: String,
    pub measure: String,
    #[serde(serialize_with = "sci")]
    pub measure_value: f64,
    #[serde(serialize_with = "sci")]
    pub f_c: f64,
    #[serde(rename = "E_g", serialize_with = "sci_opt")]
    pub e_g: Option<f64>,
    #[serde(rename = "C_f", serialize_with = "sci_opt")]
    pub c_f: Option<f64>,
    #[serde(serialize_with = "sci")]
    pub p_avg: f64,
    #[serde(serialize_with = "sci")]
    pub p_pred: f64,
    #[serde(serialize_with = "sci")]
    pub abs_dev: f64,
    #[serde(serialize_with = "millis")]
    pub wall_ms: f64,
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e)),
        _ => Ok(()),
    }
}

/// Writes rows with a header, replacing any existing file.
pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<()> {
    ensure_parent(path)?;
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|e| HarnessError::io(path, e))
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregates {
    pub rows: usize,
    pub p_avg_mean: f64,
    pub p_avg_min: f64,
    pub p_avg_max: f64,
    pub abs_dev_mean: f64,
    pub abs_dev_max: f64,
}

impl Aggregates {
    pub fn of(rows: &[ResultRow]) -> Self {
        let count = rows.len().max(1) as f64;
        Self {
            rows: rows.len(),
            p_avg_mean: rows.iter().map(|r| r.p_avg).sum::<f64>() / count,
            p_avg_min: rows.iter().map(|r| r.p_avg).fold(f64::INFINITY, f64::min),
            p_avg_max: rows.iter().map(|r| r.p_avg).fold(f64::NEG_INFINITY, f64::max),
            abs_dev_mean: rows.iter().map(|r| r.abs_dev).sum::<f64>() / count,
            abs_dev_max: rows.iter().map(|r| r.abs_dev).fold(0.0, f64::max),
        }
    }
}

/// `max |p_avg - p_pred| ≤ c / sqrt(N)`.
#[derive(Debug, Clone, Serialize)]
pub struct DeviationCheck {
    pub constant: f64,
    pub vertex_count: usize,
    pub bound: f64,
    pub max_abs_dev: f64,
    pub within_bound: bool,
}

impl DeviationCheck {
    pub fn new(constant: f64, vertex_count: usize, max_abs_dev: f64) -> Self {
        let bound = constant / (vertex_count as f64).sqrt();
        Self { constant, vertex_count, bound, max_abs_dev, within_bound: max_abs_dev <= bound }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub experiment_id: String,
    pub variant: String,
    pub n: usize,
    pub directions: usize,
    pub tau: usize,
    pub tau_rule: String,
    pub tau_exact: Option<f64>,
    pub columns: Vec<String>,
    pub config: BTreeMap<String, String>,
    pub aggregates: Aggregates,
    pub deviation_check: DeviationCheck,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> ResultRow {
        ResultRow {
            experiment_id: "x".into(),
            variant: "skw1".into(),
            n: 4,
            tau: 4,
            seed: 1,
            state: "uniform".into(),
            f_c: 1.0,
            e_g: None,
            c_f: Some(0.25),
            p_avg: 0.4,
            p_pred: 0.5,
            abs_dev: 0.1,
            leaked_weight: None,
            wall_ms: 1.23456,
        }
    }

    #[test]
    fn float_format_has_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        let back: f64 = format_float(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn csv_header_and_row() {
        let dir = std::env::temp_dir().join(format!("qwsearch-out-{}", std::process::id()));
        let path = dir.join("rows.csv");
        write_csv(&path, &[row()]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), RESULT_COLUMNS.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "x,skw1,4,4,1,uniform,1.0000000000000000e0,,2.5000000000000000e-1,4.0000000000000002e-1,5.0000000000000000e-1,1.0000000000000001e-1,,1.235"
        );
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn row_checks() {
        assert!(row().check().is_ok());
        let mut bad = row();
        bad.p_avg = f64::NAN;
        assert!(matches!(bad.check(), Err(HarnessError::Invariant { .. })));
        bad.p_avg = 1.5;
        assert!(matches!(bad.check(), Err(HarnessError::Invariant { .. })));
    }
}
