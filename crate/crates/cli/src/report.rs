//! Command reports and their two renderings.

use std::fmt::Write as _;

use reprkit::{CheckReport, LawCheck};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub subject: String,
    pub law: String,
    pub holds: bool,
    /// Index into `Report::witnesses`.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub subject: String,
    pub law: String,
    pub left: String,
    pub right: String,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub subject: String,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Violation,
}

/// Everything a command has to say. Both renderings are total functions of
/// this value, so they carry the same content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<WitnessEntry>,
    pub findings: Vec<Finding>,
    pub scope: Vec<String>,
    /// Declarations of constructed objects, in the document format.
    pub document: Option<String>,
    pub status: Status,
    pub exit: u8,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Report {
            command: command.into(),
            seed,
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            findings: Vec::new(),
            scope: Vec::new(),
            document: None,
            status: Status::Pass,
            exit: 0,
        }
    }

    pub fn law(&mut self, subject: &str, l: &LawCheck) {
        let witness = l.witness.as_ref().map(|w| {
            self.witnesses.push(WitnessEntry {
                subject: subject.to_string(),
                law: l.law.clone(),
                left: w.left.clone(),
                right: w.right.clone(),
                detail: w.detail.clone(),
            });
            self.witnesses.len() - 1
        });
        self.verdicts.push(Verdict {
            subject: subject.to_string(),
            law: l.law.clone(),
            holds: l.holds,
            witness,
        });
        self.settle();
    }

    /// Appends a checker report, prefixing its law names.
    pub fn absorb(&mut self, subject: &str, prefix: &str, r: &CheckReport) {
        for l in &r.laws {
            let l = LawCheck {
                law: format!("{prefix}{}", l.law),
                ..l.clone()
            };
            self.law(subject, &l);
        }
        for f in &r.findings {
            self.finding(subject, f);
        }
        for s in &r.scope {
            self.scope(s);
        }
    }

    pub fn finding(&mut self, subject: &str, text: impl Into<String>) {
        self.findings.push(Finding {
            subject: subject.to_string(),
            text: text.into(),
        });
    }

    pub fn scope(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !self.scope.contains(&text) {
            self.scope.push(text);
        }
    }

    fn settle(&mut self) {
        let ok = self.verdicts.iter().all(|v| v.holds);
        self.status = if ok { Status::Pass } else { Status::Violation };
        self.exit = if ok { 0 } else { 1 };
    }

    /// Subjects in order of first appearance.
    fn subjects(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        let names = self.verdicts.iter().map(|v| v.subject.as_str());
        for s in names.chain(self.findings.iter().map(|f| f.subject.as_str())) {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Text => text(r),
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

fn text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command: {}", r.command);
    let _ = writeln!(s, "seed: {}", r.seed);
    for subject in r.subjects() {
        let _ = writeln!(s, "subject: {subject}");
        for v in r.verdicts.iter().filter(|v| v.subject == subject) {
            let _ = writeln!(s, "  {}: {}", v.law, v.holds);
            if let Some(w) = v.witness.map(|i| &r.witnesses[i]) {
                let _ = write!(s, "    witness: ({}, {})", w.left, w.right);
                if let Some(d) = &w.detail {
                    let _ = write!(s, " {d}");
                }
                s.push('\n');
            }
        }
        for f in r.findings.iter().filter(|f| f.subject == subject) {
            let _ = writeln!(s, "  finding: {}", f.text);
        }
    }
    for sc in &r.scope {
        let _ = writeln!(s, "scope: {sc}");
    }
    if let Some(d) = &r.document {
        let _ = writeln!(s, "document:");
        for line in d.lines() {
            let _ = writeln!(s, "  {line}");
        }
    }
    let status = match r.status {
        Status::Pass => "pass",
        Status::Violation => "violation",
    };
    let _ = writeln!(s, "status: {status}");
    let _ = writeln!(s, "exit: {}", r.exit);
    s
}
