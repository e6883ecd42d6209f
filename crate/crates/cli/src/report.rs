//! Check records, the run manifest and report diffs.
//!
//! A report holds only what the checks decided, so two runs on the same
//! inputs serialize to identical bytes. Wall times live in the manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn digest_text(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check_id: String,
    pub instance_digest: String,
    pub verdict: String,
    /// `EXACT` or `UNDER_APPROX`: whether absences in the evidence are proofs.
    pub exactness: String,
    pub witnesses: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(command: &str, records: Vec<Record>) -> Self {
        Self {
            tool: "shiftlab".into(),
            version: VERSION.into(),
            command: command.into(),
            records,
        }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }

    /// Summary table, then one compact witness line per record.
    pub fn to_text(&self) -> String {
        let header = ["check", "instance", "verdict", "exactness"];
        let rows: Vec<[String; 4]> = self
            .records
            .iter()
            .map(|r| {
                [
                    r.check_id.clone(),
                    r.instance_digest.chars().take(12).collect(),
                    r.verdict.clone(),
                    r.exactness.clone(),
                ]
            })
            .collect();
        let mut width = header.map(|h| h.chars().count());
        for row in &rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: [&str; 4]| {
            let mut s = String::new();
            for (i, (c, w)) in cells.iter().zip(width).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let pad = w - c.chars().count();
                s.push_str(c);
                if i + 1 < cells.len() {
                    s.extend(std::iter::repeat_n(' ', pad));
                }
            }
            s.push('\n');
            s
        };
        let mut out = line(header);
        for row in &rows {
            out.push_str(&line([&row[0], &row[1], &row[2], &row[3]]));
        }
        for r in &self.records {
            let w = r.witnesses.to_string();
            let shown: String = w.chars().take(160).collect();
            let more = if w.chars().count() > 160 { "…" } else { "" };
            let _ = writeln!(out, "# {}: {shown}{more}", r.check_id);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub check_id: String,
    pub verdict: String,
    pub wall_ms: f64,
}

/// Everything needed to rerun a command and compare its output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    /// Input path → SHA-256 of its contents.
    pub input_digests: BTreeMap<String, String>,
    pub params: BTreeMap<String, Value>,
    pub version: String,
    pub outcomes: Vec<Outcome>,
    pub total_runtime_ms: f64,
    /// SHA-256 of the primary output.
    pub output_digest: String,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("manifests serialize");
        out.push('\n');
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldChange {
    /// Dotted path, e.g. `records[2].witnesses.gcd`.
    pub field: String,
    pub left: Value,
    pub right: Value,
}

/// Field-level differences between two reports; empty iff they are equal.
pub fn diff_reports(a: &Report, b: &Report) -> Vec<FieldChange> {
    let mut out = Vec::new();
    let left = serde_json::to_value(a).expect("reports serialize");
    let right = serde_json::to_value(b).expect("reports serialize");
    diff_values("", &left, &right, &mut out);
    out
}

fn diff_values(path: &str, a: &Value, b: &Value, out: &mut Vec<FieldChange>) {
    let join = |key: &str| {
        if path.is_empty() {
            key.to_string()
        } else {
            format!("{path}.{key}")
        }
    };
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
            for k in keys {
                let null = Value::Null;
                diff_values(&join(k), x.get(k).unwrap_or(&null), y.get(k).unwrap_or(&null), out);
            }
        }
        (Value::Array(x), Value::Array(y)) if path.ends_with("records") => {
            for i in 0..x.len().max(y.len()) {
                let null = Value::Null;
                diff_values(
                    &format!("{path}[{i}]"),
                    x.get(i).unwrap_or(&null),
                    y.get(i).unwrap_or(&null),
                    out,
                );
            }
        }
        _ if a != b => out.push(FieldChange {
            field: path.to_string(),
            left: a.clone(),
            right: b.clone(),
        }),
        _ => {}
    }
}

/// Indices of the records touched by a diff.
pub fn changed_records(changes: &[FieldChange]) -> Vec<usize> {
    let mut ids: Vec<usize> = changes
        .iter()
        .filter_map(|c| c.field.strip_prefix("records["))
        .filter_map(|rest| rest.split(']').next()?.parse().ok())
        .collect();
    ids.dedup();
    ids
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn record(verdict: &str) -> Record {
        Record {
            check_id: "mixing".into(),
            instance_digest: "ab".into(),
            verdict: verdict.into(),
            exactness: "EXACT".into(),
            witnesses: json!({"window": 10, "runs": [1, 2]}),
        }
    }

    #[test]
    fn identical_reports_have_no_diff() {
        let r = Report::new("check", vec![record("MIXING")]);
        assert!(diff_reports(&r, &r.clone()).is_empty());
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn verdict_change_is_one_field() {
        let a = Report::new("check", vec![record("MIXING"), record("MIXING")]);
        let b = Report::new("check", vec![record("MIXING"), record("NOT_MIXING")]);
        let d = diff_reports(&a, &b);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].field, "records[1].verdict");
        assert_eq!(changed_records(&d), [1]);
    }

    #[test]
    fn missing_record_shows_as_null() {
        let a = Report::new("check", vec![record("MIXING")]);
        let b = Report::new("check", vec![]);
        let d = diff_reports(&a, &b);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].right, Value::Null);
    }

    #[test]
    fn text_table_aligns() {
        let r = Report::new("check", vec![record("MIXING"), record("NOT_MIXING")]);
        let text = r.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("check "));
        assert_eq!(lines[1].find("MIXING"), lines[2].find("NOT_MIXING"));
    }
}
