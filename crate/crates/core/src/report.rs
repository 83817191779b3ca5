//! Machine-readable verification reports. Every bounded check records the
//! bound it used; the overall verdict is true only if every per-check
//! result passed.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub theorem: String,
    pub instances: Vec<String>,
    pub truncation: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub counts: BTreeMap<String, i64>,
    pub checks: Vec<Check>,
    pub verdict: bool,
    pub wall_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>, theorem: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            theorem: theorem.into(),
            instances: Vec::new(),
            truncation: None,
            seed: None,
            trials: None,
            counts: BTreeMap::new(),
            checks: Vec::new(),
            verdict: true,
            wall_ms: 0,
        }
    }

    pub fn instance(mut self, description: impl Into<String>) -> Self {
        self.instances.push(description.into());
        self
    }

    pub fn truncation(mut self, bound: usize) -> Self {
        self.truncation = Some(bound);
        self
    }

    pub fn seeded(mut self, seed: u64, trials: usize) -> Self {
        self.seed = Some(seed);
        self.trials = Some(trials);
        self
    }

    pub fn count(&mut self, key: impl Into<String>, value: i64) {
        self.counts.insert(key.into(), value);
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, note: impl Into<String>) {
        self.verdict &= passed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            note: note.into(),
        });
    }

    pub fn to_json(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("report serializes")
        } else {
            serde_json::to_string(self).expect("report serializes")
        }
    }
}
