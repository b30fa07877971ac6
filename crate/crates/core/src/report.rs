//! Verification reports shared by every validator and by the command line.
//!
//! A report is a list of named checks. Each check counts the instances it
//! examined and keeps the first few failure witnesses. Reports contain no
//! timing data so that identical inputs serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::Error;

const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    BoundExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub instances: u64,
    pub failures: u64,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            instances: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records one instance; `witness` is only rendered when `ok` is false.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.fail(witness());
        }
    }

    pub fn fail(&mut self, witness: String) {
        self.failures += 1;
        if self.status != Status::BoundExceeded {
            self.status = Status::Fail;
        }
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    pub fn bound_exceeded(&mut self, detail: String) {
        self.status = Status::BoundExceeded;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(detail);
        }
    }

    /// Folds an error raised while evaluating an instance into the check.
    pub fn error(&mut self, context: &str, err: &Error) {
        self.instances += 1;
        if err.is_bound_exceeded() {
            self.bound_exceeded(format!("{context}: {err}"));
        } else {
            self.fail(format!("{context}: {err}"));
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        for mut c in other.checks {
            c.name = format!("{}: {}", other.title, c.name);
            self.checks.push(c);
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True iff every check passed. An empty report is valid.
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn any_bound_exceeded(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::BoundExceeded)
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = format!("== {} ==\n", self.title);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::BoundExceeded => "BOUND",
            };
            out.push_str(&format!("[{tag}] {} ({} instances", c.name, c.instances));
            if c.failures > 0 {
                out.push_str(&format!(", {} failures", c.failures));
            }
            out.push_str(")\n");
            for w in &c.witnesses {
                out.push_str(&format!("    witness: {w}\n"));
            }
        }
        out
    }
}
