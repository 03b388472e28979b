//! Verification reports in text and structured (JSON) form.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::spectra::Check;

pub const TOOL: &str = "poring-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn of(passed: bool) -> Self {
        if passed {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// The outcome of one directive.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    /// `check:subring[:other]`
    pub id: String,
    /// The property this check certifies.
    pub property: String,
    pub line: usize,
    pub status: Status,
    pub summary: String,
    pub checks: Vec<Check>,
    /// Structured data specific to the check.
    pub data: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub input: String,
    pub input_sha256: String,
    pub seed: u64,
    pub records: Vec<Record>,
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Report {
    pub fn new(input: impl Into<String>, text: &str, seed: u64) -> Self {
        Report {
            tool: TOOL.into(),
            version: VERSION.into(),
            input: input.into(),
            input_sha256: digest(text),
            seed,
            records: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {}  input {}  sha256 {}  seed {}",
            self.tool, self.version, self.input, self.input_sha256, self.seed
        );
        for r in &self.records {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = write!(out, "{status} {} (line {}): {}", r.id, r.line, r.summary);
            if let Some(ms) = r.elapsed_ms {
                let _ = write!(out, " [{ms} ms]");
            }
            out.push('\n');
            for c in &r.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                let _ = writeln!(out, "  {mark} {}: {}", c.name, c.summary);
                if !c.passed {
                    for w in &c.witnesses {
                        let _ = writeln!(out, "       {w}");
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}
