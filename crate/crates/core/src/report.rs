//! Structured experiment records.
//!
//! Maps are `BTreeMap`s and floats are written by `serde_json`'s shortest
//! round-trip formatter, so a fixed configuration gives byte-identical JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constants::registry_hash;

/// A named table, written as CSV by the runner.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }
    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
    /// UTF-8 CSV with a header row and `.` decimals.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|v| match v {
                    Value::String(s) if s.contains(',') || s.contains('"') => format!("\"{}\"", s.replace('"', "\"\"")),
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// How a metric is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `value < tolerance`
    Below,
    /// `value > tolerance`
    Above,
    /// `value` is 1 (a boolean property)
    Holds,
}

/// One declared tolerance check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, f64>,
    pub tables: BTreeMap<String, Table>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub pass: bool,
    pub registry_hash: String,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            params: BTreeMap::new(),
            metrics: BTreeMap::new(),
            tables: BTreeMap::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            pass: true,
            registry_hash: registry_hash(),
        }
    }
    pub fn param(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), v.into());
        self
    }
    pub fn metric(&mut self, key: &str, v: f64) -> &mut Self {
        self.metrics.insert(key.to_string(), v);
        self
    }
    pub fn table(&mut self, key: &str, t: Table) -> &mut Self {
        self.tables.insert(key.to_string(), t);
        self
    }
    pub fn note(&mut self, s: impl Into<String>) -> &mut Self {
        self.notes.push(s.into());
        self
    }
    fn push_check(&mut self, name: &str, value: f64, tolerance: f64, comparison: Comparison) -> bool {
        let pass = match comparison {
            Comparison::Below => value < tolerance,
            Comparison::Above => value > tolerance,
            Comparison::Holds => value == 1.0,
        } && value.is_finite();
        self.checks.push(Check { name: name.to_string(), value, tolerance, comparison, pass });
        self.pass &= pass;
        pass
    }
    /// Records `value < tolerance`.
    pub fn check_below(&mut self, name: &str, value: f64, tolerance: f64) -> bool {
        self.push_check(name, value, tolerance, Comparison::Below)
    }
    /// Records `value > tolerance`.
    pub fn check_above(&mut self, name: &str, value: f64, tolerance: f64) -> bool {
        self.push_check(name, value, tolerance, Comparison::Above)
    }
    /// Records a boolean property.
    pub fn check_holds(&mut self, name: &str, ok: bool) -> bool {
        self.push_check(name, if ok { 1.0 } else { 0.0 }, 1.0, Comparison::Holds)
    }
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// `true` when every entry is strictly smaller than its predecessor.
pub fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Ratios `v[i+1] / v[i]`.
pub fn successive_ratios(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] / w[0]).collect()
}
