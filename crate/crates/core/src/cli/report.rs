use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::RunConfig;
use crate::bicomplex::Component;

/// One computed quantity and the operation that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub name: String,
    pub op: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub name: String,
    pub verdict: String,
}

/// A mathematical refusal: the inputs were well formed but the requested
/// object does not exist (zero divisor, singular operator, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCertificate {
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vanishing: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Arguments as given, without the program name.
    pub command: Vec<String>,
    pub config: RunConfig,
    pub results: Vec<ResultEntry>,
    pub verdicts: Vec<VerdictEntry>,
    pub warnings: Vec<String>,
    pub error: Option<ErrorCertificate>,
}

impl Report {
    pub fn new(command: Vec<String>, config: RunConfig) -> Self {
        Report {
            command,
            config,
            results: Vec::new(),
            verdicts: Vec::new(),
            warnings: Vec::new(),
            error: None,
        }
    }

    pub fn push<T: Serialize>(&mut self, name: &str, op: &str, value: &T) {
        self.results.push(ResultEntry {
            name: name.into(),
            op: op.into(),
            value: serde_json::to_value(value).expect("report values serialize"),
        });
    }

    pub fn verdict(&mut self, name: &str, verdict: impl Serialize) {
        let verdict = match serde_json::to_value(verdict).expect("verdicts serialize") {
            Value::String(s) => s,
            other => other.to_string(),
        };
        self.verdicts.push(VerdictEntry {
            name: name.into(),
            verdict,
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.join(" "));
        for r in &self.results {
            let _ = writeln!(out, "{} = {}", r.name, render(&r.value));
            let _ = writeln!(out, "  via {}", r.op);
        }
        for v in &self.verdicts {
            let _ = writeln!(out, "verdict {}: {}", v.name, v.verdict);
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error certificate [{}]: {}", e.kind, e.message);
        }
        out
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
