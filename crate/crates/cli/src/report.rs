use serde_json::{Map, Value};

use crate::{CliError, Format};

pub const SCHEMA: &str = "v1";

/// Result of one command: human-readable lines, a JSON body, and an
/// optional DOT rendering.
pub struct Report {
    command: String,
    pub passed: bool,
    fields: Map<String, Value>,
    lines: Vec<String>,
    pub dot: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report { command: command.to_string(), passed: true, fields: Map::new(), lines: Vec::new(), dot: None }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    /// Record a check; a failed check fails the report.
    pub fn check(&mut self, key: &str, ok: bool) {
        self.set(key, ok);
        self.line(format!("{key}: {ok}"));
        self.passed &= ok;
    }

    pub fn fail(&mut self, message: impl Into<String>, witness: Option<Value>) {
        let message = message.into();
        self.passed = false;
        self.line(format!("error: {message}"));
        self.set("error", message);
        if let Some(w) = witness {
            self.line(format!("witness: {w}"));
            self.set("witness", w);
        }
    }

    pub fn render(&self, format: Format, seed: u64) -> Result<String, CliError> {
        match format {
            Format::Text => {
                let mut out = String::new();
                for l in &self.lines {
                    out.push_str(l);
                    out.push('\n');
                }
                out.push_str(if self.passed { "result: PASS\n" } else { "result: FAIL\n" });
                Ok(out)
            }
            Format::Json => {
                let mut body = self.fields.clone();
                body.insert("schema".into(), SCHEMA.into());
                body.insert("command".into(), self.command.clone().into());
                body.insert("seed".into(), seed.into());
                body.insert("passed".into(), self.passed.into());
                let mut s = serde_json::to_string_pretty(&Value::Object(body)).expect("JSON values serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Dot => self
                .dot
                .clone()
                .ok_or_else(|| CliError::input("--format", format!("`{}` has no DOT rendering", self.command))),
        }
    }
}
