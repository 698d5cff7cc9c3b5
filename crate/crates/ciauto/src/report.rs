//! Shared report container for every verification suite.
//!
//! A report is a header, a list of typed records, and a summary. Records
//! are sorted by `(suite, key)` before anything is written, so parallel
//! and sequential runs produce byte-identical output.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::cmp::Ordering;
use std::fmt::Write as _;

/// Bumped whenever a record layout changes incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Passed,
    Failed,
    /// Not decided within budget. Never counts as a failure.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub key: String,
    pub status: Status,
    pub data: Value,
}

impl Record {
    pub fn new(suite: &str, key: impl Into<String>, status: Status, data: impl Serialize) -> Self {
        Record {
            suite: suite.to_string(),
            key: key.into(),
            status,
            data: serde_json::to_value(data).expect("report data serializes"),
        }
    }

    pub fn check(suite: &str, key: impl Into<String>, ok: bool, data: impl Serialize) -> Self {
        Record::new(suite, key, if ok { Status::Passed } else { Status::Failed }, data)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: u64,
    pub failed: u64,
    pub unknown: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: Value,
    pub records: Vec<Record>,
    /// Set when some budget ran out and records are missing or unknown.
    pub incomplete: bool,
}

impl Report {
    pub fn new(config: impl Serialize) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            records: Vec::new(),
            incomplete: false,
        }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = Record>) {
        self.records.extend(rs);
    }

    /// Stable sort by suite, then key with digit runs compared as numbers,
    /// so records sharing a key keep their production order.
    pub fn normalize(&mut self) {
        self.records.sort_by(|a, b| a.suite.cmp(&b.suite).then_with(|| natural_cmp(&a.key, &b.key)));
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for r in &self.records {
            match r.status {
                Status::Passed => s.passed += 1,
                Status::Failed => s.failed += 1,
                Status::Unknown => s.unknown += 1,
            }
        }
        s
    }

    pub fn failed(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Failed)
    }

    /// Line-delimited JSON: a header line, one line per record, a summary line.
    pub fn to_structured(&self) -> String {
        let mut out = String::new();
        let header = serde_json::json!({
            "kind": "header",
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "config": self.config,
        });
        writeln!(out, "{header}").unwrap();
        for r in &self.records {
            let line = serde_json::json!({
                "kind": "record",
                "schema_version": self.schema_version,
                "suite": r.suite,
                "key": r.key,
                "status": r.status,
                "data": r.data,
            });
            writeln!(out, "{line}").unwrap();
        }
        let summary = serde_json::json!({
            "kind": "summary",
            "schema_version": self.schema_version,
            "summary": self.summary(),
            "incomplete": self.incomplete,
        });
        writeln!(out, "{summary}").unwrap();
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let tag = match r.status {
                Status::Passed => "ok     ",
                Status::Failed => "FAILED ",
                Status::Unknown => "unknown",
            };
            writeln!(out, "{tag} {:<11} {}", r.suite, r.key).unwrap();
            if r.status != Status::Passed {
                writeln!(out, "        {}", r.data).unwrap();
            }
        }
        let s = self.summary();
        writeln!(out, "passed {} failed {} unknown {}", s.passed, s.failed, s.unknown).unwrap();
        if self.incomplete {
            writeln!(out, "report incomplete: a budget was exceeded").unwrap();
        }
        out
    }
}

/// Order on keys treating each maximal digit run as one number.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (x, y) = (chunks(a), chunks(b));
    for ((dx, sx), (dy, sy)) in x.iter().zip(&y) {
        let o = if *dx && *dy {
            let (tx, ty) = (sx.trim_start_matches('0'), sy.trim_start_matches('0'));
            tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty))
        } else {
            sx.cmp(sy)
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    x.len().cmp(&y.len()).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(order: &[(&str, &str, Status)]) -> Report {
        let mut r = Report::new(serde_json::json!({"seed": 1}));
        for (suite, key, st) in order {
            r.push(Record::new(suite, *key, *st, serde_json::json!({"k": key})));
        }
        r.normalize();
        r
    }

    #[test]
    fn summary_matches_tallies_and_order_is_normalized() {
        let rows = [
            ("b", "2", Status::Passed),
            ("a", "9", Status::Failed),
            ("b", "1", Status::Unknown),
            ("a", "1", Status::Passed),
        ];
        let x = sample(&rows);
        let mut rev = rows;
        rev.reverse();
        let y = sample(&rev);
        assert_eq!(x.to_structured(), y.to_structured());
        assert_eq!(x.summary(), Summary { passed: 2, failed: 1, unknown: 1 });
        let keys: Vec<_> = x.records.iter().map(|r| format!("{}/{}", r.suite, r.key)).collect();
        assert_eq!(keys, ["a/1", "a/9", "b/1", "b/2"]);
    }

    #[test]
    fn keys_order_numerically() {
        let mut ks = vec!["(10,2,3)", "(5,2,3)", "(5,10)", "(5,3)", "pencil n=4 q=101", "pencil n=4 q=13"];
        ks.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(ks, ["(5,2,3)", "(5,3)", "(5,10)", "(10,2,3)", "pencil n=4 q=13", "pencil n=4 q=101"]);
    }

    #[test]
    fn structured_lines_parse_and_carry_schema() {
        let x = sample(&[("a", "1", Status::Passed)]);
        let lines: Vec<Value> = x.to_structured().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l["schema_version"] == SCHEMA_VERSION));
        assert_eq!(lines[2]["summary"]["passed"], 1);
    }
}
