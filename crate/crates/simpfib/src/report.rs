//! Shared check-report format used by all validators and the CLI.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    pub millis: u128,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ReportConfig {
    pub max_dim: usize,
    pub seed: u64,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub config: ReportConfig,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(suite: impl Into<String>, config: ReportConfig) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.into(),
            config,
            checks: Vec::new(),
        }
    }

    pub fn record(
        &mut self,
        name: impl Into<String>,
        dimension: Option<usize>,
        counterexample: Option<String>,
    ) {
        self.checks.push(CheckRecord {
            name: name.into(),
            dimension,
            status: if counterexample.is_some() {
                CheckStatus::Fail
            } else {
                CheckStatus::Pass
            },
            counterexample,
            millis: 0,
        });
    }

    pub fn pass(&mut self, name: impl Into<String>, dimension: Option<usize>) {
        self.record(name, dimension, None);
    }

    pub fn fail(
        &mut self,
        name: impl Into<String>,
        dimension: Option<usize>,
        counterexample: impl Into<String>,
    ) {
        self.record(name, dimension, Some(counterexample.into()));
    }

    pub fn absorb(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite: {} (max-dim {}, seed {}, samples {})\n",
            self.suite, self.config.max_dim, self.config.seed, self.config.samples
        ));
        for note in &self.config.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        for c in &self.checks {
            let dim = c
                .dimension
                .map(|d| format!(" [dim {d}]"))
                .unwrap_or_default();
            match c.status {
                CheckStatus::Pass => out.push_str(&format!("  PASS {}{}\n", c.name, dim)),
                CheckStatus::Fail => out.push_str(&format!(
                    "  FAIL {}{}: {}\n",
                    c.name,
                    dim,
                    c.counterexample.as_deref().unwrap_or("(no witness)")
                )),
            }
        }
        out.push_str(&format!(
            "overall: {} ({} checks, {} failed)\n",
            if self.passed() { "pass" } else { "FAIL" },
            self.checks.len(),
            self.failures().count()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_status_tracks_records() {
        let mut r = Report::new("t", ReportConfig::default());
        r.pass("a", None);
        assert!(r.passed());
        r.fail("b", Some(2), "witness");
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("t", ReportConfig { max_dim: 3, seed: 0, samples: 10, notes: vec![] });
        r.fail("x", Some(1), "cex");
        let s = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back.suite, "t");
        assert_eq!(back.checks.len(), 1);
        assert_eq!(back.checks[0].status, CheckStatus::Fail);
    }
}
