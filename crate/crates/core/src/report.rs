//! Verification reports, JSON-line serialization and report merging.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::padic::{digits, PadicElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Undetermined,
}

impl Verdict {
    /// Combines item verdicts: any fail wins, then any undetermined.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            _ => Pass,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionAudit {
    pub requested: u32,
    pub guard: u32,
    /// Digits lost to divisions and logarithms on the worst path.
    pub consumed: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub field: String,
    pub p: u64,
    pub inputs: Map<String, Value>,
    pub quantities: Map<String, Value>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limiting_resource: Option<String>,
    pub precision: PrecisionAudit,
}

impl VerificationReport {
    pub fn new(check: &str, field: impl ToString, p: u64) -> Self {
        VerificationReport {
            check: check.to_string(),
            field: field.to_string(),
            p,
            inputs: Map::new(),
            quantities: Map::new(),
            verdict: Verdict::Pass,
            limiting_resource: None,
            precision: PrecisionAudit::default(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.quantities.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn set_padic(&mut self, key: &str, x: &PadicElement) {
        self.set(key, padic_to_json(x));
    }

    pub fn fail(&mut self) {
        self.verdict = self.verdict.combine(Verdict::Fail);
    }

    pub fn undetermined(&mut self, resource: impl ToString) {
        self.verdict = self.verdict.combine(Verdict::Undetermined);
        self.limiting_resource.get_or_insert_with(|| resource.to_string());
    }

    pub fn key(&self) -> (String, u64, String) {
        (self.field.clone(), self.p, self.check.clone())
    }

    /// A report for an item that could not be evaluated.
    pub fn from_error(check: &str, field: impl ToString, p: u64, err: &Error) -> Self {
        let mut r = VerificationReport::new(check, field, p);
        match err {
            Error::InsufficientPrecision(_) | Error::DegreeCapExceeded { .. } | Error::ModulusTooWide { .. } => {
                r.undetermined(err)
            }
            _ => {
                r.set("error", err.to_string());
                r.fail();
            }
        }
        r
    }
}

/// `{"digits": ..., "precision": ...}` for elements of `Z_p`; one digit string
/// per coordinate otherwise.
pub fn padic_to_json(x: &PadicElement) -> Value {
    let ctx = x.context();
    let p = ctx.p();
    let digits: Vec<String> = x.coeffs().iter().map(|&c| digits::encode(c, p, x.precision())).collect();
    let mut m = Map::new();
    if digits.len() == 1 {
        m.insert("digits".into(), Value::String(digits[0].clone()));
    } else {
        m.insert("digits".into(), serde_json::to_value(digits).unwrap());
    }
    m.insert("precision".into(), x.precision().into());
    Value::Object(m)
}

/// One output line: the deterministic report plus the timing envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportLine {
    pub report: VerificationReport,
    pub envelope: Envelope,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub elapsed_ms: f64,
}

impl ReportLine {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

pub fn parse_report_lines(text: &str) -> Result<Vec<ReportLine>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() }))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeSummary {
    pub total: usize,
    pub counts: BTreeMap<Verdict, usize>,
    pub duplicates: usize,
    pub conflicts: Vec<String>,
}

/// Merges report sets, deduplicating on `(field, p, check)`; duplicates whose
/// reports differ are flagged.
pub fn merge(sets: &[Vec<ReportLine>]) -> (Vec<VerificationReport>, MergeSummary) {
    let mut seen: BTreeMap<(String, u64, String), VerificationReport> = BTreeMap::new();
    let mut summary = MergeSummary::default();
    for line in sets.iter().flatten() {
        let key = line.report.key();
        match seen.get(&key) {
            Some(prev) => {
                summary.duplicates += 1;
                if prev != &line.report {
                    let tag = format!("{} p={} {}", key.0, key.1, key.2);
                    if !summary.conflicts.contains(&tag) {
                        summary.conflicts.push(tag);
                    }
                }
            }
            None => {
                seen.insert(key, line.report.clone());
            }
        }
    }
    let merged: Vec<VerificationReport> = seen.into_values().collect();
    summary.total = merged.len();
    for r in &merged {
        *summary.counts.entry(r.verdict).or_default() += 1;
    }
    (merged, summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(field: &str, check: &str, verdict: Verdict) -> ReportLine {
        let mut r = VerificationReport::new(check, field, 7);
        r.verdict = verdict;
        ReportLine { report: r, envelope: Envelope { elapsed_ms: 1.0 } }
    }

    #[test]
    fn merging() {
        let a = vec![line("f=8 H=7", "lp", Verdict::Pass)];
        let b = vec![line("f=5 H=4", "lp", Verdict::Fail)];
        let (m, s) = merge(&[a.clone(), b]);
        assert_eq!(m.len(), 2);
        assert_eq!(s.counts[&Verdict::Pass], 1);
        assert_eq!(s.counts[&Verdict::Fail], 1);
        let c = vec![line("f=8 H=7", "lp", Verdict::Fail)];
        let (m, s) = merge(&[a.clone(), a.clone(), c]);
        assert_eq!(m.len(), 1);
        assert_eq!(s.duplicates, 2);
        assert_eq!(s.conflicts.len(), 1);
        let (m, s) = merge(&[]);
        assert!(m.is_empty() && s.total == 0);
    }

    #[test]
    fn lines_round_trip() {
        let l = line("f=8 H=7", "lp", Verdict::Undetermined);
        let text = format!("{}\n\n{}\n", l.to_json(), l.to_json());
        assert_eq!(parse_report_lines(&text).unwrap(), vec![l.clone(), l]);
        assert!(parse_report_lines("{").is_err());
    }
}
