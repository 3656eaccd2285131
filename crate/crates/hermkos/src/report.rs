//! Verification reports and their canonical serializations.

use std::fmt;

use serde_json::{json, Value};

use crate::json::to_canonical_string;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One check: its name, the statement it tests, its status and evidence.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub evidence: Value,
}

impl Record {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, status: Status, evidence: Value) -> Self {
        Record {
            name: name.into(),
            anchor: anchor.into(),
            status,
            evidence,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

/// A finished run: the configuration echo and the records sorted by name.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config: Value,
    pub records: Vec<Record>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Md,
}

impl Report {
    /// Sorts the records by name so that output order is fixed.
    pub fn new(config: Value, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        Report { config, records }
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for r in &self.records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Inconclusive => s.inconclusive += 1,
            }
        }
        s
    }

    /// 0 when every record passes, 1 when any fails, 2 when none fails but
    /// some are inconclusive (or there are no records at all).
    pub fn exit_code(&self) -> i32 {
        let s = self.summary();
        if s.fail > 0 {
            1
        } else if s.inconclusive > 0 || self.records.is_empty() {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        let s = self.summary();
        json!({
            "schema": SCHEMA_VERSION,
            "config": self.config,
            "records": self.records.iter().map(|r| json!({
                "name": r.name,
                "anchor": r.anchor,
                "status": r.status.as_str(),
                "evidence": r.evidence,
            })).collect::<Vec<_>>(),
            "summary": {"pass": s.pass, "fail": s.fail, "inconclusive": s.inconclusive},
            "exit_code": self.exit_code(),
        })
    }

    fn to_markdown(&self) -> String {
        let s = self.summary();
        let mut out = String::new();
        out.push_str("# Verification report\n\n");
        out.push_str(&format!(
            "- schema: {SCHEMA_VERSION}\n- pass: {}\n- fail: {}\n- inconclusive: {}\n- exit code: {}\n\n",
            s.pass,
            s.fail,
            s.inconclusive,
            self.exit_code()
        ));
        out.push_str("## Configuration\n\n```json\n");
        out.push_str(&to_canonical_string(&self.config));
        out.push_str("```\n");
        for r in &self.records {
            out.push_str(&format!("\n## {}\n\n", r.name));
            out.push_str(&format!("- statement: {}\n- status: **{}**\n\n", r.anchor, r.status));
            out.push_str("```json\n");
            out.push_str(&to_canonical_string(&r.evidence));
            out.push_str("```\n");
        }
        out
    }
}

/// Canonical bytes of a report; identical configurations give identical bytes.
pub fn emit(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_canonical_string(&report.to_json()).into_bytes(),
        Format::Md => report.to_markdown().into_bytes(),
    }
}
