//! Reports: a human-readable table plus a structured JSON block.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Value,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Value => "value",
            Status::Error => "error",
        }
    }

    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Value)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub task: String,
    pub command: String,
    pub args: Vec<(String, String)>,
    pub status: Status,
    /// Ordered payload; arrays of objects are rendered as tables.
    pub payload: Map<String, Value>,
    pub witness: Vec<String>,
}

impl Report {
    pub fn new(task: &str, command: &str, args: &[(String, String)]) -> Self {
        Self {
            task: task.to_string(),
            command: command.to_string(),
            args: args.to_vec(),
            status: Status::Value,
            payload: Map::new(),
            witness: Vec::new(),
        }
    }

    pub fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.payload.insert(key.to_string(), v.into());
    }

    /// Marks the report failed unless `ok`, recording the witness.
    pub fn require(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.status = Status::Fail;
            self.witness.push(witness());
        } else if self.status == Status::Value {
            self.status = Status::Pass;
        }
    }

    pub fn error(task: &str, command: &str, args: &[(String, String)], msg: String) -> Self {
        let mut r = Self::new(task, command, args);
        r.status = Status::Error;
        r.witness.push(msg);
        r
    }

    pub fn to_json(&self) -> Value {
        let args: Map<String, Value> = self.args.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        json!({
            "task": self.task,
            "command": self.command,
            "args": args,
            "status": self.status.as_str(),
            "payload": self.payload,
            "witness": self.witness,
        })
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== task {}: {} ==", self.task, self.command);
        if !self.args.is_empty() {
            let a: Vec<String> = self.args.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "args: {}", a.join(" "));
        }
        let _ = writeln!(out, "status: {}", self.status.as_str());
        for (k, v) in &self.payload {
            match v {
                Value::Array(rows) if rows.iter().any(Value::is_object) => {
                    let _ = writeln!(out, "{k}:");
                    out.push_str(&table(rows));
                }
                _ => {
                    let _ = writeln!(out, "{k}: {}", scalar(v));
                }
            }
        }
        if !self.witness.is_empty() {
            let _ = writeln!(out, "witness:");
            for w in &self.witness {
                let _ = writeln!(out, "  {w}");
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Left-aligned columns taken from the keys of the first row.
fn table(rows: &[Value]) -> String {
    let cols: Vec<String> = rows.iter().find_map(Value::as_object).map(|m| m.keys().cloned().collect()).unwrap_or_default();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| r.get(c).map_or_else(|| "-".into(), scalar)).collect())
        .collect();
    let widths: Vec<usize> =
        cols.iter().enumerate().map(|(k, c)| cells.iter().map(|r| r[k].len()).chain([c.len()]).max().unwrap()).collect();
    let line = |items: &[String]| {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    let mut out = line(&cols);
    for r in &cells {
        out.push_str(&line(r));
    }
    out
}

/// Marker line separating the human section from the structured block.
pub const STRUCTURED_MARKER: &str = "## structured";

/// Renders a whole run: every human section, then one JSON array.
pub fn render(reports: &[Report], human: bool, structured: bool) -> String {
    let mut out = String::new();
    if human {
        for (k, r) in reports.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            out.push_str(&r.to_human());
        }
    }
    if structured {
        if human {
            out.push('\n');
            out.push_str(STRUCTURED_MARKER);
            out.push('\n');
        }
        let arr = Value::Array(reports.iter().map(Report::to_json).collect());
        out.push_str(&serde_json::to_string_pretty(&arr).expect("reports serialize"));
        out.push('\n');
    }
    out
}

/// Extracts the structured block from rendered output.
pub fn structured_block(output: &str) -> Option<Value> {
    let body = match output.find(STRUCTURED_MARKER) {
        Some(p) => &output[p + STRUCTURED_MARKER.len()..],
        None => output,
    };
    serde_json::from_str(body.trim()).ok()
}
