//! Report structure shared by all commands: a list of named checks,
//! each tagged with the anchor of the statement it implements, rendered
//! as text or JSON. The JSON field names are documented in
//! `docs/json-schema.md`.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
    Inapplicable,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Info => "info",
            Status::Inapplicable => "n/a ",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            checks: Vec::new(),
            ok: true,
        }
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        anchor: impl Into<String>,
        status: Status,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn check(
        &mut self,
        name: impl Into<String>,
        anchor: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
    ) {
        self.push(name, anchor, if ok { Status::Pass } else { Status::Fail }, detail);
    }

    /// A whole-command "inapplicable" report.
    pub fn inapplicable(command: &str, anchor: &str, missing: &str) -> Report {
        let mut r = Report::new(command);
        r.push(
            command,
            anchor,
            Status::Inapplicable,
            format!("inapplicable: {missing}"),
        );
        r
    }

    /// Sorts checks by name and recomputes the verdict; every command
    /// finishes its report here so the output order is deterministic.
    pub fn finish(mut self) -> Report {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.ok = !self.checks.iter().any(|c| c.status == Status::Fail);
        self
    }

    /// Merges a sub-report into this one under a name prefix.
    pub fn absorb(&mut self, prefix: &str, sub: Report) {
        for mut c in sub.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for c in &self.checks {
            let _ = writeln!(out, "{} {} [{}] {}", c.status.tag(), c.name, c.anchor, c.detail);
        }
        let _ = writeln!(out, "result: {}", if self.ok { "ok" } else { "failed" });
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}
