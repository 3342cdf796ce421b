//! Structured pass/fail verdicts.
//!
//! Every decision operation can render its outcome as a `Report`: a list of
//! named checks, each carrying a human-readable detail line and, where it
//! makes sense, a witness or counterexample serialized in the same syntax the
//! input files use.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { subject: subject.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into(), witness: None });
    }

    pub fn push_witness(
        &mut self,
        name: impl Into<String>,
        pass: bool,
        detail: impl Into<String>,
        witness: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
            witness: Some(witness.into()),
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.subject));
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}: {}\n", c.name, c.detail));
            if let Some(w) = &c.witness {
                out.push_str(&format!("         witness: {w}\n"));
            }
        }
        out
    }
}
