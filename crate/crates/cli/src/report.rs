use std::fmt::Write as _;

use algkit_core::pn::CheckReport;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const VERSION: &str = concat!("algkit ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub input_sha256: String,
    pub outputs: Vec<NamedValue>,
    pub checks: Vec<CheckRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub pass: bool,
    pub witness: Option<WitnessRow>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    #[serde(skip)]
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    pub at: String,
    pub value: String,
}

impl From<CheckReport> for CheckRow {
    fn from(c: CheckReport) -> Self {
        CheckRow {
            name: c.name,
            pass: c.pass,
            witness: c.witness.map(|w| WitnessRow { at: w.at, value: w.value }),
            informational: c.informational,
            notes: c.notes,
        }
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: &str, input: &[u8]) -> Self {
        Report {
            version: VERSION.into(),
            command: command.into(),
            input_sha256: digest(input),
            outputs: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn output(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.outputs.push(NamedValue { name: name.into(), value: value.into() });
    }

    pub fn check(&mut self, c: CheckReport) {
        self.checks.push(c.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| !c.informational).all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self, color: bool) -> String {
        let paint = |code: &str, s: &str| if color { format!("\x1b[{code}m{s}\x1b[0m") } else { s.to_string() };
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.version, self.command);
        let _ = writeln!(out, "input sha256 {}", self.input_sha256);
        for o in &self.outputs {
            let _ = writeln!(out, "{} = {}", o.name, o.value);
        }
        for c in &self.checks {
            let tag = match (c.pass, c.informational) {
                (true, false) => paint("32", "PASS"),
                (false, false) => paint("31", "FAIL"),
                (true, true) => paint("36", "info"),
                (false, true) => paint("33", "info"),
            };
            let _ = write!(out, "{tag} {}", c.name);
            if let Some(w) = &c.witness {
                let _ = write!(out, " at {}: {}", w.at, w.value);
            }
            if !c.pass && !c.notes.is_empty() {
                let _ = write!(out, " ({})", c.notes);
            }
            out.push('\n');
        }
        let verdict = if self.passed() { paint("32", "all checks passed") } else { paint("31", "some checks failed") };
        let _ = writeln!(out, "{verdict}");
        out
    }
}
