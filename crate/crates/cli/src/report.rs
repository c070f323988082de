use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write;

/// Where a check lives. Field order is the canonical sort order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Location {
    pub context: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
    pub check: String,
}

impl Location {
    pub fn new(context: &str, check: &str) -> Self {
        Location { context: context.into(), subgroup: None, degree: None, check: check.into() }
    }

    pub fn at(mut self, subgroup: impl Into<String>) -> Self {
        self.subgroup = Some(subgroup.into());
        self
    }

    pub fn deg(mut self, q: i32) -> Self {
        self.degree = Some(q);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub location: Location,
    /// `None` when nothing independent was available to compare against
    #[serde(default)]
    pub expected: Option<String>,
    pub computed: String,
    pub pass: bool,
}

impl Record {
    pub fn check(location: Location, expected: impl Into<String>, computed: impl Into<String>) -> Self {
        let (expected, computed) = (expected.into(), computed.into());
        let pass = expected == computed;
        Record { location, expected: Some(expected), computed, pass }
    }

    pub fn flag(location: Location, expected: impl Into<String>, computed: impl Into<String>, pass: bool) -> Self {
        Record { location, expected: Some(expected.into()), computed: computed.into(), pass }
    }

    pub fn info(location: Location, computed: impl Into<String>) -> Self {
        Record { location, expected: None, computed: computed.into(), pass: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// passing records with no reference value
    pub unchecked: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: Value,
    pub seed: u64,
    pub window: usize,
    pub rank_budget: usize,
    pub records: Vec<Record>,
    pub summary: Summary,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub outputs: BTreeMap<String, Value>,
    /// milliseconds; not part of the deterministic content
    #[serde(default)]
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    /// Sort records and recount.
    pub fn finish(&mut self) {
        self.records.sort_by(|a, b| a.location.cmp(&b.location));
        self.notes.sort();
        self.notes.dedup();
        let failed = self.records.iter().filter(|r| !r.pass).count();
        let unchecked = self.records.iter().filter(|r| r.expected.is_none()).count();
        let total = self.records.len();
        self.summary = Summary { total, passed: total - failed, failed, unchecked };
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let kind = self.task.get("kind").and_then(Value::as_str).unwrap_or("none");
        let _ = writeln!(out, "task: {kind}");
        let _ = writeln!(out, "seed: {}  window: {}  rank budget: {}", self.seed, self.window, self.rank_budget);
        for r in &self.records {
            let mark = if r.pass { "ok  " } else { "FAIL" };
            let _ = write!(out, "{mark} {}", coords(&r.location));
            match &r.expected {
                Some(e) if !r.pass => {
                    let _ = writeln!(out, ": expected {e}, computed {}", r.computed);
                }
                _ => {
                    let _ = writeln!(out, ": {}", r.computed);
                }
            }
        }
        for (k, v) in &self.outputs {
            let _ = writeln!(out, "output {k}: {}", short(v));
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let s = &self.summary;
        let _ = writeln!(out, "{} checks, {} passed ({} without reference), {} failures", s.total, s.passed, s.unchecked, s.failed);
        if s.failed > 0 {
            let _ = writeln!(out, "failing cells:");
            for r in self.failures() {
                let l = &r.location;
                let _ = writeln!(
                    out,
                    "  (subgroup {}, degree {}) {} / {}: expected {}, computed {}",
                    l.subgroup.as_deref().unwrap_or("-"),
                    l.degree.map_or("-".to_string(), |q| q.to_string()),
                    l.context,
                    l.check,
                    r.expected.as_deref().unwrap_or("-"),
                    r.computed
                );
            }
        }
        out
    }
}

fn coords(l: &Location) -> String {
    let mut s = l.context.clone();
    if let Some(h) = &l.subgroup {
        s.push_str(&format!(" H={h}"));
    }
    if let Some(q) = l.degree {
        s.push_str(&format!(" q={q}"));
    }
    s.push_str(&format!(" {}", l.check));
    s
}

fn short(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(_) | Value::Array(_) => {
            let s = v.to_string();
            if s.len() > 120 {
                format!("{}... ({} bytes)", s.chars().take(100).collect::<String>(), s.len())
            } else {
                s
            }
        }
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_a_document() {
        let mut r = Report::default();
        r.finish();
        let text = r.to_json();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.summary.total, 0);
        assert!(r.to_text().contains("0 failures"));
    }

    #[test]
    fn emit_parse_emit_is_idempotent() {
        let mut r = Report { task: serde_json::json!({"kind": "shift", "group": "S3"}), seed: 9, window: 5, ..Default::default() };
        r.records.push(Record::info(Location::new("shift", "step 0 pushout"), "ranks 1,6"));
        r.records.push(Record::flag(Location::new("shift", "x").at("{0}").deg(-3), "Z/3", "0", false));
        r.notes.push("checked for |q| <= 4 only".into());
        r.outputs.insert("degree".into(), serde_json::json!(-1));
        r.timings.insert("total".into(), 12.345);
        r.finish();
        let once = r.to_json();
        let back: Report = serde_json::from_str(&once).unwrap();
        assert_eq!(back.to_json(), once);
        assert_eq!(back.to_text(), r.to_text());
    }

    #[test]
    fn failures_are_listed_with_coordinates() {
        let mut r = Report::default();
        r.records.push(Record::check(Location::new("C2", "tate").at("{0,1}").deg(2), "Z/4", "Z/2"));
        r.records.push(Record::check(Location::new("C2", "tate").at("{0,1}").deg(1), "0", "0"));
        r.finish();
        assert_eq!(r.records[0].location.degree, Some(1));
        assert_eq!((r.summary.passed, r.summary.failed), (1, 1));
        assert!(r.to_text().contains("(subgroup {0,1}, degree 2)"));
    }
}
