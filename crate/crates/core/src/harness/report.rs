use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bumped whenever a field is added, removed or renamed.
pub const REPORT_VERSION: u32 = 1;

/// Outcome of one harness suite.
///
/// All fields except `duration_ms` are a pure function of the suite and its
/// parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: u32,
    pub suite: String,
    pub parameters: String,
    pub states_checked: u64,
    pub passes: u64,
    pub failures: u64,
    /// Fallback decisions keyed by rule tag, phase and waiver.
    pub fallbacks_by_tag: BTreeMap<String, u64>,
    pub fallbacks_by_phase: BTreeMap<String, u64>,
    pub fallbacks_by_waiver: BTreeMap<String, u64>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub exemplars: Vec<Exemplar>,
    pub notes: Vec<String>,
    pub duration_ms: u64,
}

/// A failing state, with the move line that reaches it where relevant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exemplar {
    pub state: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub line: Vec<String>,
    pub expected: String,
    pub actual: String,
}

/// Failure exemplars kept per report.
pub const MAX_EXEMPLARS: usize = 25;

impl VerificationReport {
    pub fn new(suite: impl Into<String>, parameters: impl Into<String>, columns: &[&str]) -> Self {
        VerificationReport {
            version: REPORT_VERSION,
            suite: suite.into(),
            parameters: parameters.into(),
            states_checked: 0,
            passes: 0,
            failures: 0,
            fallbacks_by_tag: BTreeMap::new(),
            fallbacks_by_phase: BTreeMap::new(),
            fallbacks_by_waiver: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            exemplars: Vec::new(),
            notes: Vec::new(),
            duration_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn pass(&mut self) {
        self.states_checked += 1;
        self.passes += 1;
    }

    pub fn fail(&mut self, exemplar: Exemplar) {
        self.states_checked += 1;
        self.failures += 1;
        if self.exemplars.len() < MAX_EXEMPLARS {
            self.exemplars.push(exemplar);
        }
    }

    pub fn check(&mut self, ok: bool, exemplar: impl FnOnce() -> Exemplar) {
        if ok {
            self.pass()
        } else {
            self.fail(exemplar())
        }
    }

    pub fn count_fallback(&mut self, tag: &str, phase: &str, waiver: &str) {
        *self.fallbacks_by_tag.entry(tag.to_string()).or_default() += 1;
        *self.fallbacks_by_phase.entry(phase.to_string()).or_default() += 1;
        *self.fallbacks_by_waiver.entry(waiver.to_string()).or_default() += 1;
    }

    pub fn fallback_total(&self) -> u64 {
        self.fallbacks_by_tag.values().sum()
    }

    /// Folds `other` into `self`; rows, exemplars and notes are appended in order.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.states_checked += other.states_checked;
        self.passes += other.passes;
        self.failures += other.failures;
        for (src, dst) in [
            (other.fallbacks_by_tag, &mut self.fallbacks_by_tag),
            (other.fallbacks_by_phase, &mut self.fallbacks_by_phase),
            (other.fallbacks_by_waiver, &mut self.fallbacks_by_waiver),
        ] {
            for (k, v) in src {
                *dst.entry(k).or_default() += v;
            }
        }
        self.rows.extend(other.rows);
        let room = MAX_EXEMPLARS.saturating_sub(self.exemplars.len());
        self.exemplars.extend(other.exemplars.into_iter().take(room));
        self.notes.extend(other.notes);
        self.duration_ms += other.duration_ms;
    }

    /// Copy with the wall-clock field zeroed, for byte comparisons.
    pub fn without_duration(&self) -> Self {
        VerificationReport {
            duration_ms: 0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown report format {0:?} (expected json, csv or text)")]
pub struct UnknownFormat(pub String);

impl FromStr for ReportFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

pub fn emit_report(report: &VerificationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut out = report.columns.join(",");
            out.push('\n');
            for row in &report.rows {
                let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        ReportFormat::Text => text(report),
    }
}

fn csv_cell(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "{verdict} {} [{}]", r.suite, r.parameters);
    let _ = writeln!(
        out,
        "  checked {}  passed {}  failed {}  fallbacks {}  ({} ms)",
        r.states_checked,
        r.passes,
        r.failures,
        r.fallback_total(),
        r.duration_ms
    );
    if !r.fallbacks_by_tag.is_empty() {
        let _ = writeln!(out, "  fallbacks by waiver:");
        for (k, v) in &r.fallbacks_by_waiver {
            let _ = writeln!(out, "    {k:<28} {v}");
        }
        let _ = writeln!(out, "  fallbacks by tag:");
        for (k, v) in &r.fallbacks_by_tag {
            let _ = writeln!(out, "    {k:<28} {v}");
        }
        let _ = writeln!(out, "  fallbacks by phase:");
        for (k, v) in &r.fallbacks_by_phase {
            let _ = writeln!(out, "    {k:<28} {v}");
        }
    }
    for note in &r.notes {
        let _ = writeln!(out, "  note: {note}");
    }
    for e in &r.exemplars {
        let _ = writeln!(
            out,
            "  failure at {}: expected {}, got {}",
            e.state, e.expected, e.actual
        );
        if !e.line.is_empty() {
            let _ = writeln!(out, "    line: {}", e.line.join(" "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_a_valid_document() {
        let r = VerificationReport::new("theorem", "max_n=0", &["p", "q", "n", "claimed", "solved", "agree"]);
        assert_eq!(emit_report(&r, ReportFormat::Csv), "p,q,n,claimed,solved,agree\n");
        let json = emit_report(&r, ReportFormat::Json);
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(r.passed());
    }

    #[test]
    fn failures_flip_the_verdict() {
        let mut r = VerificationReport::new("x", "", &[]);
        r.fail(Exemplar {
            state: "<1,1;;>".into(),
            line: vec![],
            expected: "a".into(),
            actual: "b".into(),
        });
        assert!(!r.passed());
        assert!(emit_report(&r, ReportFormat::Text).starts_with("FAIL"));
        assert!("yaml".parse::<ReportFormat>().is_err());
    }
}
