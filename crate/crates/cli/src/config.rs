//! The line-oriented workbench config.
//!
//! ```text
//! # comments start with '#'
//! [graph]
//! vertices 1 2
//! edge 1 2
//!
//! [weight lam]
//! coroot 1 = 1
//!
//! [task 1]
//! command = klr-mul
//! expr = psi(1)*psi(1)*e(1 1)
//! ```
//!
//! Coroot values left out of a weight section are 0.

use std::collections::BTreeMap;

use klr_core::rootdata::{RootDataError, RootDatum, Weight};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError { line, msg: msg.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedWeight {
    pub name: String,
    pub weight: Weight,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub id: String,
    pub command: String,
    /// Parameters in declaration order.
    pub params: Vec<(String, String)>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct WorkbenchConfig {
    pub datum: RootDatum,
    pub weights: Vec<NamedWeight>,
    pub tasks: Vec<Task>,
}

impl WorkbenchConfig {
    /// Type A1 with a single vertex `1`, used when no config is given.
    pub fn default_sl2() -> Self {
        Self { datum: RootDatum::type_a(1), weights: Vec::new(), tasks: Vec::new() }
    }

    pub fn weight(&self, name: &str) -> Option<&NamedWeight> {
        self.weights.iter().find(|w| w.name == name)
    }
}

enum Section {
    None,
    Graph,
    Weight(usize),
    Task(usize),
}

fn split_kv(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    Some((k.trim(), v.trim()))
}

/// Name, header line and `(line, vertex, value)` coroot entries of a weight section.
type RawWeight = (String, usize, Vec<(usize, String, i64)>);

pub fn parse_config(text: &str) -> Result<WorkbenchConfig, ConfigError> {
    let mut vertices: Option<(usize, Vec<String>)> = None;
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    // coroot entries are resolved once the graph is known
    let mut raw_weights: Vec<RawWeight> = Vec::new();
    let mut tasks: Vec<Task> = Vec::new();
    let mut graph_line = None;
    let mut section = Section::None;

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let Some(inner) = inner.strip_suffix(']') else {
                return err(ln, "section header is missing ']'");
            };
            let mut parts = inner.split_whitespace();
            section = match (parts.next(), parts.next(), parts.next()) {
                (Some("graph"), None, _) => {
                    if graph_line.is_some() {
                        return err(ln, "second [graph] section");
                    }
                    graph_line = Some(ln);
                    Section::Graph
                }
                (Some("weight"), Some(name), None) => {
                    if raw_weights.iter().any(|w| w.0 == name) {
                        return err(ln, format!("weight '{name}' declared twice"));
                    }
                    raw_weights.push((name.to_string(), ln, Vec::new()));
                    Section::Weight(raw_weights.len() - 1)
                }
                (Some("task"), Some(id), None) => {
                    if tasks.iter().any(|t| t.id == id) {
                        return err(ln, format!("task '{id}' declared twice"));
                    }
                    tasks.push(Task { id: id.to_string(), command: String::new(), params: Vec::new(), line: ln });
                    Section::Task(tasks.len() - 1)
                }
                _ => return err(ln, format!("unknown section [{inner}]; expected [graph], [weight <name>] or [task <id>]")),
            };
            continue;
        }
        match section {
            Section::None => return err(ln, "expected a section header before any key"),
            Section::Graph => {
                let mut toks = line.split_whitespace();
                match toks.next() {
                    Some("vertices") => {
                        if vertices.is_some() {
                            return err(ln, "vertices declared twice");
                        }
                        let vs: Vec<String> = toks.map(str::to_string).collect();
                        if vs.is_empty() {
                            return err(ln, "vertices needs at least one label");
                        }
                        for (a, v) in vs.iter().enumerate() {
                            if vs[..a].contains(v) {
                                return err(ln, format!("duplicate vertex {v}"));
                            }
                        }
                        vertices = Some((ln, vs));
                    }
                    Some("edge") => {
                        let ends: Vec<&str> = toks.collect();
                        if ends.len() != 2 {
                            return err(ln, "edge needs exactly two vertices: edge <from> <to>");
                        }
                        edges.push((ln, ends[0].to_string(), ends[1].to_string()));
                    }
                    Some(other) => return err(ln, format!("unknown key '{other}' in [graph]; expected vertices or edge")),
                    None => unreachable!(),
                }
            }
            Section::Weight(w) => {
                let Some((key, value)) = split_kv(line) else {
                    return err(ln, "expected 'coroot <vertex> = <integer>'");
                };
                let mut kt = key.split_whitespace();
                let (Some("coroot"), Some(vertex), None) = (kt.next(), kt.next(), kt.next()) else {
                    return err(ln, format!("unknown key '{key}' in weight section; expected 'coroot <vertex>'"));
                };
                let Ok(n) = value.parse::<i64>() else {
                    return err(ln, format!("coroot value '{value}' is not an integer"));
                };
                raw_weights[w].2.push((ln, vertex.to_string(), n));
            }
            Section::Task(t) => {
                let Some((key, value)) = split_kv(line) else {
                    return err(ln, "expected '<key> = <value>'");
                };
                if key.is_empty() || key.contains(char::is_whitespace) {
                    return err(ln, format!("malformed key '{key}'"));
                }
                let task = &mut tasks[t];
                if key == "command" {
                    if !task.command.is_empty() {
                        return err(ln, "command given twice");
                    }
                    task.command = value.to_string();
                } else {
                    if task.params.iter().any(|(k, _)| k == key) {
                        return err(ln, format!("parameter '{key}' given twice"));
                    }
                    task.params.push((key.to_string(), value.to_string()));
                }
            }
        }
    }

    let Some(gl) = graph_line else {
        return err(1, "missing [graph] section");
    };
    let Some((_, labels)) = vertices else {
        return err(gl, "[graph] section has no vertices line");
    };
    for (ln, a, b) in &edges {
        for v in [a, b] {
            if !labels.contains(v) {
                return err(*ln, format!("edge references undeclared vertex {v}"));
            }
        }
        if a == b {
            return err(*ln, format!("loop edge at vertex {a}: the graph must have no loops"));
        }
    }
    let pairs: Vec<(String, String)> = edges.iter().map(|(_, a, b)| (a.clone(), b.clone())).collect();
    let datum = RootDatum::build(&labels, &pairs).map_err(|e: RootDataError| ConfigError { line: gl, msg: e.to_string() })?;

    let mut weights = Vec::new();
    for (name, ln, entries) in raw_weights {
        let mut coords = vec![0i64; datum.rank()];
        let mut seen = BTreeMap::new();
        for (eln, v, n) in entries {
            let Some(i) = datum.index_of(&v) else {
                return err(eln, format!("coroot references undeclared vertex {v}"));
            };
            if seen.insert(i, eln).is_some() {
                return err(eln, format!("coroot {v} given twice"));
            }
            coords[i] = n;
        }
        weights.push(NamedWeight { name, weight: Weight(coords), line: ln });
    }
    for t in &tasks {
        if t.command.is_empty() {
            return err(t.line, format!("task '{}' has no command", t.id));
        }
    }
    Ok(WorkbenchConfig { datum, weights, tasks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_a2() {
        let c = parse_config("[graph]\nvertices 1 2\nedge 1 2\n").unwrap();
        assert_eq!(c.datum.epsilon(0, 1), 1);
        assert_eq!(c.datum.epsilon(1, 0), 0);
    }

    #[test]
    fn weights_and_tasks() {
        let c = parse_config(
            "# demo\n[graph]\nvertices a b\nedge a b\n[weight lam]\ncoroot b = 2 # trailing\n[task t1]\ncommand = klr-mul\nexpr = e(a b)\n",
        )
        .unwrap();
        assert_eq!(c.weight("lam").unwrap().weight, Weight(vec![0, 2]));
        assert_eq!(c.tasks[0].command, "klr-mul");
        assert_eq!(c.tasks[0].params, vec![("expr".to_string(), "e(a b)".to_string())]);
    }

    #[test]
    fn undeclared_vertex_names_vertex_and_line() {
        let e = parse_config("[graph]\nvertices 1 2\nedge 1 3\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("vertex 3"), "{e}");
    }

    #[test]
    fn loop_edge_is_rejected() {
        let e = parse_config("[graph]\nvertices 1 2\nedge 2 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("no loops"), "{e}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for (text, line) in [
            ("[graph]\nvertices 1\ncolour red\n", 3),
            ("[graph]\nvertices 1\n[weight w]\nfoo 1 = 2\n", 4),
            ("[graph]\nvertices 1\n[stuff]\n", 3),
            ("vertices 1\n", 1),
            ("[graph]\nvertices 1\n[weight w]\ncoroot 2 = 1\n", 4),
            ("[graph]\nvertices 1\n[weight w]\ncoroot 1 = x\n", 4),
            ("[graph]\nvertices 1\n[task a]\nexpr = e(1)\n", 3),
            ("[weight w]\n", 1),
        ] {
            let e = parse_config(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
        }
    }
}
