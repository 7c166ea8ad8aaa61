//! Reports: checks plus named values, rendered as JSON, CSV or plain text.

use cnzn::check::Check;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
    /// Named values in emission order.
    pub values: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report { command: command.to_string(), config, checks: Vec::new(), values: Vec::new() }
    }

    pub fn value(&mut self, name: impl Into<String>, v: Value) {
        self.values.push((name.into(), v));
    }

    pub fn to_json(&self) -> Value {
        let passed = self.checks.iter().all(|c| c.passed);
        json!({
            "command": self.command,
            "config": self.config,
            "status": if passed { "verified" } else { "failed" },
            "checks": self.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
            "values": self.values.iter().map(|(k, v)| json!({ "name": k, "value": v })).collect::<Vec<_>>(),
        })
    }
}

/// True when the report's status is "verified".
pub fn verified(report: &Value) -> bool {
    report["status"] == "verified"
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(report: &Value, format: Format) -> String {
    let checks = report["checks"].as_array().cloned().unwrap_or_default();
    let values = report["values"].as_array().cloned().unwrap_or_default();
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("JSON values always serialize") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["kind", "name", "status", "value"]).expect("in-memory write");
            for c in &checks {
                let status = if c["passed"] == true { "PASS" } else { "FAIL" };
                w.write_record(["check", &scalar(&c["name"]), status, &scalar(&c["detail"])]).expect("in-memory write");
            }
            for v in &values {
                w.write_record(["value", &scalar(&v["name"]), "", &scalar(&v["value"])]).expect("in-memory write");
            }
            w.write_record(["status", &scalar(&report["command"]), &scalar(&report["status"]), ""]).expect("in-memory write");
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV of UTF-8 fields")
        }
        Format::Text => {
            let mut out = format!("{} {}\n", report["command"].as_str().unwrap_or(""), crate::cache::canonical(&report["config"]));
            for c in &checks {
                let status = if c["passed"] == true { "PASS" } else { "FAIL" };
                out.push_str(&format!("{status} {}: {}\n", scalar(&c["name"]), scalar(&c["detail"])));
            }
            for v in &values {
                out.push_str(&format!("{} = {}\n", scalar(&v["name"]), scalar(&v["value"])));
            }
            out.push_str(&format!("status: {}\n", scalar(&report["status"])));
            out
        }
    }
}
