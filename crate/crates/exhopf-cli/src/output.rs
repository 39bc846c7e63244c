//! Report values shared by every subcommand, rendered as JSON or text.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};

/// Version of the JSON layout.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// One named check with its failures.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub pass: bool,
    pub details: Vec<String>,
}

impl Section {
    pub fn new(name: impl Into<String>, failures: Vec<String>) -> Self {
        Section { name: name.into(), pass: failures.is_empty(), details: failures }
    }

    /// A passing section carrying informational lines.
    pub fn info(name: impl Into<String>, details: Vec<String>) -> Self {
        Section { name: name.into(), pass: true, details }
    }
}

/// Result of one subcommand.
pub struct Output {
    pub json: Value,
    pub text: String,
    /// Name of the first failing check, if any.
    pub failure: Option<String>,
}

impl Output {
    pub fn new(command: &str, body: Value, text: String) -> Self {
        let mut json = json!({ "schema": SCHEMA, "command": command });
        if let (Some(obj), Value::Object(extra)) = (json.as_object_mut(), body) {
            obj.extend(extra);
        }
        Output { json, text, failure: None }
    }

    pub fn with_failure(mut self, failure: Option<String>) -> Self {
        self.failure = failure;
        self
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let mut body = match format {
            Format::Json => serde_json::to_string_pretty(&self.json)?,
            Format::Text => self.text.trim_end().to_string(),
        };
        body.push('\n');
        match path {
            Some(p) => fs::write(p, body)?,
            None => std::io::stdout().lock().write_all(body.as_bytes())?,
        }
        Ok(())
    }
}

/// Text lines for a list of sections.
pub fn render_sections(sections: &[Section]) -> String {
    let mut out = String::new();
    for s in sections {
        out.push_str(&format!("{} {}\n", if s.pass { "PASS" } else { "FAIL" }, s.name));
        for d in &s.details {
            out.push_str(&format!("    {d}\n"));
        }
    }
    out
}
