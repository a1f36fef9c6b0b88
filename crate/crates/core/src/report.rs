//! Verification reports: one record per check, with a text table and a
//! JSON form.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::spec::ModelSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

/// What a single check produced before timing is attached.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// Passed; the payload summarizes what was verified.
    Pass(Value),
    Fail(Value),
    Skip(String),
}

impl Outcome {
    pub fn pass() -> Self {
        Outcome::Pass(Value::Null)
    }

    pub fn from_bool(ok: bool, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Outcome::pass()
        } else {
            Outcome::Fail(witness())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: Status,
    /// Name of the statement being checked.
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    pub wall_time_ms: f64,
}

impl CheckRecord {
    pub fn new(id: &str, reference: &str, outcome: Outcome, elapsed: Duration) -> Self {
        let (status, detail, witness, skip_reason) = match outcome {
            Outcome::Pass(v) => (Status::Pass, (!v.is_null()).then_some(v), None, None),
            Outcome::Fail(v) => {
                let w = if v.is_null() {
                    Value::String("no witness recorded".into())
                } else {
                    v
                };
                (Status::Fail, None, Some(w), None)
            }
            Outcome::Skip(reason) => (Status::Skipped, None, None, Some(reason)),
        };
        Self {
            id: id.to_string(),
            status,
            reference: reference.to_string(),
            detail,
            witness,
            skip_reason,
            wall_time_ms: elapsed.as_secs_f64() * 1e3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub spec: ModelSpec,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(suite: &str, spec: ModelSpec, seed: u64) -> Self {
        Self {
            suite: suite.to_string(),
            spec,
            seed,
            checks: Vec::new(),
        }
    }

    /// Runs a check, timing it. Errors become failures carrying the message.
    pub fn run(&mut self, id: &str, reference: &str, check: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let outcome = match check() {
            Ok(o) => o,
            Err(e) => Outcome::Fail(serde_json::json!({ "error": e.to_string() })),
        };
        self.checks
            .push(CheckRecord::new(id, reference, outcome, start.elapsed()));
    }

    pub fn skip(&mut self, id: &str, reference: &str, reason: &str) {
        self.checks.push(CheckRecord::new(
            id,
            reference,
            Outcome::Skip(reason.to_string()),
            Duration::ZERO,
        ));
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("report JSON: {e}")))
    }

    /// Aligned text table.
    pub fn to_table(&self) -> String {
        let id_w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(5);
        let mut out = String::new();
        let _ = writeln!(out, "suite {} on {} (seed {})", self.suite, self.spec, self.seed);
        let _ = writeln!(out, "{:<id_w$}  {:<7}  {:>10}  note", "check", "status", "ms");
        for c in &self.checks {
            let note = match c.status {
                Status::Pass => c.reference.clone(),
                Status::Skipped => c.skip_reason.clone().unwrap_or_default(),
                Status::Fail => c.witness.as_ref().map(Value::to_string).unwrap_or_default(),
            };
            let _ = writeln!(
                out,
                "{:<id_w$}  {:<7}  {:>10.1}  {}",
                c.id,
                c.status.label(),
                c.wall_time_ms,
                note
            );
        }
        let _ = writeln!(
            out,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        out
    }
}
