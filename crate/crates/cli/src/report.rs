//! Verification reports, rendered as text or as versioned JSON.

use serde_json::{json, Map, Value};
use twistkit_core::morphisms::Verdict;

pub const SCHEMA: &str = "twistkit.report.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
struct Check {
    name: String,
    passed: bool,
    witness: Option<String>,
}

/// Outcome of one subcommand: named values, named checks with witnesses and
/// any emitted block-format text.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    command: String,
    fields: Map<String, Value>,
    checks: Vec<Check>,
    artifacts: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), fields: Map::new(), checks: Vec::new(), artifacts: Vec::new() }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    /// Records a named check. Failing checks make the report fail.
    pub fn check(&mut self, name: &str, passed: bool, witness: Option<String>) -> &mut Self {
        self.checks.push(Check { name: name.to_string(), passed, witness });
        self
    }

    pub fn verdict(&mut self, name: &str, v: &Verdict) -> &mut Self {
        self.check(name, v.holds, v.witness.clone())
    }

    /// Emitted `.alg` text, printed before the summary in text mode.
    pub fn artifact(&mut self, text: String) -> &mut Self {
        self.artifacts.push(text);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn witnesses(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.witness.as_deref().unwrap_or("no witness recorded"))).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), SCHEMA.into());
        out.insert("command".into(), self.command.clone().into());
        out.insert("status".into(), (if self.passed() { "verified" } else { "failed" }).into());
        for (k, v) in &self.fields {
            out.insert(k.clone(), v.clone());
        }
        let checks: Vec<Value> = self.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "witness": c.witness })).collect();
        out.insert("checks".into(), checks.into());
        out.insert("witnesses".into(), self.witnesses().into());
        if !self.artifacts.is_empty() {
            out.insert("alg".into(), self.artifacts.concat().into());
        }
        Value::Object(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.artifacts {
            out.push_str(a);
            out.push('\n');
        }
        for (k, v) in &self.fields {
            if k == "presentation" {
                continue;
            }
            out.push_str(&format!("{}: {}\n", k.replace('_', " "), plain(v)));
        }
        for c in &self.checks {
            match (&c.witness, c.passed) {
                (_, true) => out.push_str(&format!("check {}: ok\n", c.name)),
                (Some(w), false) => out.push_str(&format!("check {}: FAILED ({w})\n", c.name)),
                (None, false) => out.push_str(&format!("check {}: FAILED\n", c.name)),
            }
        }
        out.push_str(if self.passed() { "status: verified\n" } else { "status: failed\n" });
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => format!("{:#}\n", self.to_json()),
        }
    }
}

/// Report for input that could not be read.
pub fn input_error(command: &str, message: &str, format: Format) -> String {
    match format {
        Format::Text => format!("error: {message}\n"),
        Format::Json => format!("{:#}\n", json!({ "schema": SCHEMA, "command": command, "status": "input-error", "error": message })),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) if xs.is_empty() => "none".into(),
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => xs.iter().map(plain).collect::<Vec<_>>().join(", "),
        Value::Array(xs) => xs.iter().map(|x| format!("\n  {}", plain(x))).collect(),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect::<Vec<_>>().join(" "),
        v => v.to_string(),
    }
}
