use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

/// One named check. `anchor` names the statement the check exercises.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub anchor: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(check: impl Into<String>, anchor: &'static str, pass: bool, detail: impl Into<String>) -> Verdict {
        Verdict { check: check.into(), anchor, pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Value, results: Value, verdicts: Vec<Verdict>) -> Report {
        let pass = verdicts.iter().all(|v| v.pass);
        Report {
            schema: SCHEMA,
            tool: "combasis",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            config,
            results,
            verdicts,
            pass,
            wall_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// One row per verdict.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("command,check,anchor,pass,detail\n");
        for v in &self.verdicts {
            let _ = writeln!(s, "{},{},{},{},{}", csv_field(&self.command), csv_field(&v.check), v.anchor, v.pass, csv_field(&v.detail));
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}  command: {}\n", self.tool, self.version, self.command);
        let _ = writeln!(s, "config: {}", self.config);
        if !self.results.is_null() {
            let _ = writeln!(s, "results: {}", self.results);
        }
        for v in &self.verdicts {
            let _ = writeln!(s, "{} {} [{}] {}", if v.pass { "PASS" } else { "FAIL" }, v.check, v.anchor, v.detail);
        }
        if let Some(ms) = self.wall_ms {
            let _ = writeln!(s, "wall time: {ms} ms");
        }
        let _ = writeln!(s, "overall: {}", if self.pass { "pass" } else { "fail" });
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
