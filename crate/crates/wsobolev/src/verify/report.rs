//! JSON report schema shared by all experiments.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub field_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Both sides vanish; excluded from the summary.
    #[serde(skip_serializing_if = "is_false")]
    pub vacuous: bool,
    #[serde(flatten)]
    pub extra: BTreeMap<String, f64>,
}

impl Row {
    pub fn new(field_id: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let vacuous = lhs == 0.0 && rhs == 0.0;
        let ratio = if vacuous { 0.0 } else { lhs / rhs };
        Row { field_id: field_id.into(), lhs, rhs, ratio, vacuous, extra: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub violations: usize,
    pub thresholds: BTreeMap<String, f64>,
    pub passed: bool,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl Summary {
    /// max/mean over the non-vacuous rows.
    pub fn from_rows(rows: &[Row]) -> Self {
        let live: Vec<f64> = rows.iter().filter(|r| !r.vacuous).map(|r| r.ratio).collect();
        let max_ratio = live.iter().copied().fold(0.0, f64::max);
        let mean_ratio = if live.is_empty() { 0.0 } else { live.iter().sum::<f64>() / live.len() as f64 };
        Summary { max_ratio, mean_ratio, violations: 0, thresholds: BTreeMap::new(), passed: true, extra: BTreeMap::new() }
    }

    pub fn threshold(&mut self, key: &str, value: f64) -> &mut Self {
        self.thresholds.insert(key.to_string(), value);
        self
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.extra.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    /// Records a named assertion; failed assertions count as violations.
    pub fn assert(&mut self, key: &str, ok: bool) -> &mut Self {
        self.note(&format!("check_{key}"), ok);
        if !ok {
            self.violations += 1;
            self.passed = false;
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub manifold: Value,
    pub params: Value,
    pub rows: Vec<Row>,
    pub summary: Summary,
    /// Wall-clock time; null unless timing was requested, so that reports
    /// stay byte-identical across runs.
    pub runtime_ms: Option<u64>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, manifold: Value, params: impl Serialize, rows: Vec<Row>, summary: Summary) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            manifold,
            params: serde_json::to_value(params).unwrap_or(Value::Null),
            rows,
            summary,
            runtime_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Report of the `cover` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub experiment: String,
    pub manifold: Value,
    pub params: Value,
    pub centers: Vec<Vec<f64>>,
    pub radii: Vec<f64>,
    pub max_overlap: usize,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
    pub summary: Summary,
    pub runtime_ms: Option<u64>,
}

impl CoverReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl ExperimentReport {
    /// Concatenates several reports into one; row ids, thresholds and notes
    /// are prefixed with the part name.
    pub fn merge(experiment: &str, manifold: Value, parts: Vec<(&str, ExperimentReport)>) -> Self {
        let mut rows = Vec::new();
        let mut params = serde_json::Map::new();
        for (name, part) in &parts {
            for row in &part.rows {
                let mut r = row.clone();
                r.field_id = format!("{name}/{}", r.field_id);
                rows.push(r);
            }
            params.insert(name.to_string(), part.params.clone());
        }
        let mut summary = Summary::from_rows(&rows);
        for (name, part) in &parts {
            let s = &part.summary;
            for (k, v) in &s.thresholds {
                summary.threshold(&format!("{name}_{k}"), *v);
            }
            for (k, v) in &s.extra {
                summary.extra.insert(format!("{name}_{k}"), v.clone());
            }
            summary.violations += s.violations;
            summary.passed &= s.passed;
        }
        ExperimentReport { experiment: experiment.to_string(), manifold, params: Value::Object(params), rows, summary, runtime_ms: None }
    }
}
