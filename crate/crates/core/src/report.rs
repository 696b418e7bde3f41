//! Per-check verification records and their JSON/CSV serialization.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// One verified claim at one input, with enough data to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub inputs: Value,
    pub expected: Value,
    pub observed: Value,
    /// Worst deviation from the claim; `None` for purely exact or boolean checks.
    pub residual: Option<f64>,
    pub status: Status,
}

impl Check {
    pub fn new(id: impl Into<String>, status: Status) -> Self {
        Check { id: id.into(), inputs: Value::Null, expected: Value::Null, observed: Value::Null, residual: None, status }
    }

    pub fn inputs(mut self, v: Value) -> Self {
        self.inputs = v;
        self
    }

    pub fn expected(mut self, v: Value) -> Self {
        self.expected = v;
        self
    }

    pub fn observed(mut self, v: Value) -> Self {
        self.observed = v;
        self
    }

    /// Non-finite residuals are stored as `None` so the record stays valid JSON.
    pub fn residual(mut self, r: f64) -> Self {
        self.residual = r.is_finite().then_some(r);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

impl Summary {
    pub fn of(checks: &[Check]) -> Self {
        let count = |s| checks.iter().filter(|c| c.status == s).count();
        Summary {
            total: checks.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            inconclusive: count(Status::Inconclusive),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub wall_time_ms: f64,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>, checks: Vec<Check>, wall_time_ms: f64) -> Self {
        let summary = Summary::of(&checks);
        SuiteReport { name: name.into(), checks, summary, wall_time_ms }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub config: Value,
    pub suites: Vec<SuiteReport>,
}

impl VerificationReport {
    pub fn new(config: Value, suites: Vec<SuiteReport>) -> Self {
        VerificationReport { schema_version: SCHEMA_VERSION, config, suites }
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.suites.iter().flat_map(|s| s.checks.iter())
    }

    pub fn find(&self, id: &str) -> Option<(&SuiteReport, &Check)> {
        self.suites.iter().find_map(|s| s.checks.iter().find(|c| c.id == id).map(|c| (s, c)))
    }

    pub fn has_failures(&self) -> bool {
        self.checks().any(|c| c.status == Status::Fail)
    }

    pub fn summary(&self) -> Summary {
        let all: Vec<Check> = self.checks().cloned().collect();
        Summary::of(&all)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: VerificationReport = serde_json::from_str(text)?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!("unsupported schema_version {}", report.schema_version)));
        }
        Ok(report)
    }

    /// One row per check; structured fields are embedded as compact JSON.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "id", "status", "residual", "inputs", "expected", "observed"])?;
        for s in &self.suites {
            for c in &s.checks {
                let residual = c.residual.map(|r| format!("{r:e}")).unwrap_or_default();
                w.write_record([
                    s.name.as_str(),
                    c.id.as_str(),
                    &c.status.to_string(),
                    &residual,
                    &c.inputs.to_string(),
                    &c.expected.to_string(),
                    &c.observed.to_string(),
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn write(&self, path: &Path, format: ReportFormat) -> Result<()> {
        let text = match format {
            ReportFormat::Json => self.to_json()?,
            ReportFormat::Csv => self.to_csv()?,
        };
        fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}
