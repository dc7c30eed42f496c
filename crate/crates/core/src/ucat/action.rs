//! Candidate categorical actions and their text fixture format.
//!
//! ```text
//! candidate-action
//! weight w0 coords 1 dim 1
//! end w0 1 1
//! E 1 w1 1x1
//!   1
//! table klr strands 1 dim 2
//! idem 1
//!   1 0
//!   0 1
//! dot 1
//!   0 0
//!   1 0
//! bubble 1 w0 maxdeg 4
//! cw 0:1 1:0 2:0
//! ccw -2:1 -1:0 0:0
//! ```
//!
//! `E i w` is the graded multiplicity matrix of `E_i` leaving weight `w`
//! (rows indexed by the target space); entries are Laurent polynomials
//! separated by ` | `. `end w k p` gives the graded dimension of the
//! endomorphisms of object `k` (1-based). Operator tables hold dense rational
//! matrices with space-separated entries. Printing and parsing are inverse.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{format_rational, parse_rational, LaurentPoly, Matrix, Rational};
use crate::klr::cyclotomic::OperatorTables;
use crate::rootdata::{RootDatum, Weight};

use super::bubbles::{BubblePair, BubbleSeries, Rotation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEntry {
    pub name: String,
    pub weight: Weight,
    pub dim: usize,
    /// Graded dimensions of the endomorphism algebras of the objects, when known.
    pub end_dims: Option<Vec<LaurentPoly>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateAction {
    pub weights: Vec<WeightEntry>,
    /// `[E_i]` out of weight index `w`, keyed `(i, w)`.
    pub e: BTreeMap<(usize, usize), Matrix<LaurentPoly>>,
    /// `[F_i]` out of weight index `w`, keyed `(i, w)`.
    pub f: BTreeMap<(usize, usize), Matrix<LaurentPoly>>,
    pub tables: Vec<(String, OperatorTables)>,
    pub bubbles: Vec<BubblePair>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid candidate: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ActionError> {
    Err(ActionError::Invalid(msg.into()))
}

impl CandidateAction {
    pub fn empty() -> Self {
        Self { weights: Vec::new(), e: BTreeMap::new(), f: BTreeMap::new(), tables: Vec::new(), bubbles: Vec::new() }
    }

    pub fn index_of_weight(&self, w: &Weight) -> Option<usize> {
        self.weights.iter().position(|x| &x.weight == w)
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.weights.iter().position(|x| x.name == name)
    }

    /// Index of the weight reached by `E_i` (`raise`) or `F_i` from weight index `w`.
    pub fn neighbor(&self, d: &RootDatum, raise: bool, i: usize, w: usize) -> Option<usize> {
        let a = d.simple_root(i);
        let t = if raise { self.weights[w].weight.add(&a) } else { self.weights[w].weight.sub(&a) };
        self.index_of_weight(&t)
    }

    /// The matrix of `E_i`/`F_i` out of `w`, zero if undeclared; `None` if the target is not a declared weight.
    pub fn op(&self, d: &RootDatum, raise: bool, i: usize, w: usize) -> Option<Matrix<LaurentPoly>> {
        let t = self.neighbor(d, raise, i, w)?;
        let map = if raise { &self.e } else { &self.f };
        Some(map.get(&(i, w)).cloned().unwrap_or_else(|| Matrix::zeros(self.weights[t].dim, self.weights[w].dim)))
    }

    /// Structural checks run before any certification condition.
    pub fn validate(&self, d: &RootDatum) -> Result<(), ActionError> {
        let n = d.rank();
        for (k, w) in self.weights.iter().enumerate() {
            if w.weight.0.len() != n {
                return invalid(format!("weight {} has {} coordinates, expected {n}", w.name, w.weight.0.len()));
            }
            if self.weights[..k].iter().any(|x| x.name == w.name || x.weight == w.weight) {
                return invalid(format!("weight {} is declared twice", w.name));
            }
            if let Some(ed) = &w.end_dims {
                if ed.len() != w.dim {
                    return invalid(format!("weight {} lists {} endomorphism dimensions for {} objects", w.name, ed.len(), w.dim));
                }
            }
        }
        for (raise, map) in [(true, &self.e), (false, &self.f)] {
            let g = if raise { "E" } else { "F" };
            for (&(i, w), m) in map {
                if i >= n || w >= self.weights.len() {
                    return invalid(format!("{g} matrix with vertex {i} or weight {w} out of range"));
                }
                let Some(t) = self.neighbor(d, raise, i, w) else {
                    return invalid(format!(
                        "{g}_{} out of {} lands on an undeclared weight",
                        d.label(i),
                        self.weights[w].name
                    ));
                };
                if m.rows() != self.weights[t].dim || m.cols() != self.weights[w].dim {
                    return invalid(format!(
                        "{g}_{} out of {} is {}x{}, expected {}x{}",
                        d.label(i),
                        self.weights[w].name,
                        m.rows(),
                        m.cols(),
                        self.weights[t].dim,
                        self.weights[w].dim
                    ));
                }
            }
        }
        for (name, t) in &self.tables {
            let square = |m: &Matrix<Rational>| m.rows() == t.dim && m.cols() == t.dim;
            if t.dots.len() != t.strands || t.psis.len() != t.strands.saturating_sub(1) {
                return invalid(format!("table {name} needs {} dot and {} crossing matrices", t.strands, t.strands.saturating_sub(1)));
            }
            for (word, m) in &t.idems {
                if word.len() != t.strands || word.iter().any(|&c| c >= n) {
                    return invalid(format!("table {name} has an idempotent for a malformed word"));
                }
                if !square(m) {
                    return invalid(format!("table {name}: idempotent matrix is not {0}x{0}", t.dim));
                }
            }
            if !t.dots.iter().chain(&t.psis).all(square) {
                return invalid(format!("table {name}: generator matrices must be {0}x{0}", t.dim));
            }
        }
        for b in &self.bubbles {
            if b.cw.color >= n || b.cw.weight.0.len() != n || b.cw.color != b.ccw.color || b.cw.weight != b.ccw.weight {
                return invalid("bubble data with mismatched color or weight");
            }
            if self.index_of_weight(&b.cw.weight).is_none() {
                return invalid(format!("bubble in undeclared weight {}", b.cw.weight));
            }
        }
        Ok(())
    }

    /// Serializes in the fixture format.
    pub fn to_text(&self, d: &RootDatum) -> String {
        let mut s = String::from("candidate-action\n");
        for w in &self.weights {
            let coords: Vec<String> = w.weight.0.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "weight {} coords {} dim {}", w.name, coords.join(" "), w.dim);
        }
        for w in &self.weights {
            if let Some(ed) = &w.end_dims {
                for (k, p) in ed.iter().enumerate() {
                    let _ = writeln!(s, "end {} {} {}", w.name, k + 1, p);
                }
            }
        }
        for (g, map) in [("E", &self.e), ("F", &self.f)] {
            for (&(i, w), m) in map {
                let _ = writeln!(s, "{g} {} {} {}x{}", d.label(i), self.weights[w].name, m.rows(), m.cols());
                for r in 0..m.rows() {
                    let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(s, "  {}", row.join(" | "));
                }
            }
        }
        for (name, t) in &self.tables {
            let _ = writeln!(s, "table {name} strands {} dim {}", t.strands, t.dim);
            let mut emit = |head: String, m: &Matrix<Rational>| {
                let _ = writeln!(s, "{head}");
                for r in 0..m.rows() {
                    let row: Vec<String> = m.row(r).iter().map(format_rational).collect();
                    let _ = writeln!(s, "  {}", row.join(" "));
                }
            };
            for (word, m) in &t.idems {
                emit(format!("idem {}", d.word_string(word)), m);
            }
            for (k, m) in t.dots.iter().enumerate() {
                emit(format!("dot {}", k + 1), m);
            }
            for (k, m) in t.psis.iter().enumerate() {
                emit(format!("psi {}", k + 1), m);
            }
        }
        for b in &self.bubbles {
            // validate() guarantees the weight is declared
            let wname = self.index_of_weight(&b.cw.weight).map_or("?", |k| self.weights[k].name.as_str());
            let _ = writeln!(s, "bubble {} {} maxdeg {}", d.label(b.cw.color), wname, b.max_deg);
            for ser in [&b.cw, &b.ccw] {
                let parts: Vec<String> = ser.values.iter().map(|(m, v)| format!("{m}:{}", format_rational(v))).collect();
                let _ = writeln!(s, "{} {}", ser.rotation, parts.join(" "));
            }
        }
        s
    }

    /// Parses the fixture format.
    pub fn parse(d: &RootDatum, text: &str) -> Result<Self, ActionError> {
        Parser { d, lines: text.lines().enumerate().collect(), at: 0 }.run()
    }
}

struct Parser<'a> {
    d: &'a RootDatum,
    lines: Vec<(usize, &'a str)>,
    at: usize,
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, ActionError> {
    Err(ActionError::Parse { line: line + 1, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn next_header(&mut self) -> Option<(usize, &'a str)> {
        while self.at < self.lines.len() {
            let (n, l) = self.lines[self.at];
            self.at += 1;
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((n, l));
        }
        None
    }

    /// Consumes the indented row lines that follow a matrix header.
    fn rows(&mut self, count: usize, header: usize) -> Result<Vec<(usize, &'a str)>, ActionError> {
        let mut out = Vec::new();
        while out.len() < count {
            let Some(&(n, l)) = self.lines.get(self.at) else {
                return perr(header, format!("expected {count} matrix rows, found {}", out.len()));
            };
            if !l.starts_with("  ") {
                return perr(n, "expected an indented matrix row");
            }
            self.at += 1;
            out.push((n, l.trim()));
        }
        Ok(out)
    }

    fn vertex(&self, line: usize, label: &str) -> Result<usize, ActionError> {
        match self.d.index_of(label) {
            Some(i) => Ok(i),
            None => perr(line, format!("unknown vertex '{label}'")),
        }
    }

    fn run(mut self) -> Result<CandidateAction, ActionError> {
        let mut c = CandidateAction::empty();
        match self.next_header() {
            Some((_, l)) if l.trim() == "candidate-action" => {}
            Some((n, _)) => return perr(n, "expected 'candidate-action'"),
            None => return perr(0, "empty fixture"),
        }
        let mut cur_table: Option<usize> = None;
        while let Some((n, line)) = self.next_header() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "weight" => {
                    // weight <name> coords c1 .. cr dim k
                    let r = self.d.rank();
                    if toks.len() != r + 5 || toks[2] != "coords" || toks[r + 3] != "dim" {
                        return perr(n, format!("expected 'weight <name> coords <{r} integers> dim <n>'"));
                    }
                    let coords = toks[3..3 + r]
                        .iter()
                        .map(|t| t.parse::<i64>())
                        .collect::<Result<Vec<_>, _>>()
                        .or_else(|_| perr(n, "weight coordinates must be integers"))?;
                    let dim = toks[r + 4].parse::<usize>().or_else(|_| perr(n, "dim must be a nonnegative integer"))?;
                    c.weights.push(WeightEntry { name: toks[1].to_string(), weight: Weight(coords), dim, end_dims: None });
                }
                "end" => {
                    let parts: Vec<&str> = line.trim().splitn(4, ' ').collect();
                    if parts.len() < 4 {
                        return perr(n, "expected 'end <weight> <object> <laurent>'");
                    }
                    let w = c.index_of_name(parts[1]).map_or_else(|| perr(n, format!("unknown weight '{}'", parts[1])), Ok)?;
                    let k = parts[2].parse::<usize>().or_else(|_| perr(n, "object index must be a positive integer"))?;
                    let rest = parts[3].trim();
                    let p = LaurentPoly::parse(rest).or_else(|e| perr(n, e.to_string()))?;
                    let dim = c.weights[w].dim;
                    let ed = c.weights[w].end_dims.get_or_insert_with(|| vec![LaurentPoly::zero(); dim]);
                    if k == 0 || k > ed.len() {
                        return perr(n, format!("object index {k} out of range"));
                    }
                    ed[k - 1] = p;
                }
                "E" | "F" => {
                    if toks.len() != 4 {
                        return perr(n, "expected '<E|F> <vertex> <weight> <rows>x<cols>'");
                    }
                    let i = self.vertex(n, toks[1])?;
                    let w = c.index_of_name(toks[2]).map_or_else(|| perr(n, format!("unknown weight '{}'", toks[2])), Ok)?;
                    let (r, k) = shape(n, toks[3])?;
                    let mut m = Matrix::zeros(r, k);
                    for (ri, (ln, row)) in self.rows(r, n)?.into_iter().enumerate() {
                        let entries: Vec<&str> = if row.is_empty() { vec![] } else { row.split(" | ").collect() };
                        if entries.len() != k {
                            return perr(ln, format!("expected {k} entries, found {}", entries.len()));
                        }
                        for (ci, e) in entries.into_iter().enumerate() {
                            m.set(ri, ci, LaurentPoly::parse(e.trim()).or_else(|err| perr(ln, err.to_string()))?);
                        }
                    }
                    let map = if toks[0] == "E" { &mut c.e } else { &mut c.f };
                    if map.insert((i, w), m).is_some() {
                        return perr(n, "matrix declared twice");
                    }
                }
                "table" => {
                    if toks.len() != 6 || toks[2] != "strands" || toks[4] != "dim" {
                        return perr(n, "expected 'table <name> strands <n> dim <d>'");
                    }
                    let strands = toks[3].parse::<usize>().or_else(|_| perr(n, "bad strand count"))?;
                    let dim = toks[5].parse::<usize>().or_else(|_| perr(n, "bad dimension"))?;
                    c.tables.push((
                        toks[1].to_string(),
                        OperatorTables { dim, strands, idems: BTreeMap::new(), dots: Vec::new(), psis: Vec::new() },
                    ));
                    cur_table = Some(c.tables.len() - 1);
                }
                "idem" | "dot" | "psi" => {
                    let Some(ti) = cur_table else {
                        return perr(n, format!("'{}' outside a table", toks[0]));
                    };
                    let dim = c.tables[ti].1.dim;
                    let mut m = Matrix::zeros(dim, dim);
                    let rows = self.rows(dim, n)?;
                    for (ri, (ln, row)) in rows.into_iter().enumerate() {
                        let entries: Vec<&str> = row.split_whitespace().collect();
                        if entries.len() != dim {
                            return perr(ln, format!("expected {dim} entries, found {}", entries.len()));
                        }
                        for (ci, e) in entries.into_iter().enumerate() {
                            let v = parse_rational(e).map_or_else(|| perr(ln, format!("bad rational '{e}'")), Ok)?;
                            m.set(ri, ci, v);
                        }
                    }
                    let t = &mut c.tables[ti].1;
                    match toks[0] {
                        "idem" => {
                            let word = toks[1..].iter().map(|l| self.vertex(n, l)).collect::<Result<Vec<_>, _>>()?;
                            t.idems.insert(word, m);
                        }
                        g => {
                            let k = toks.get(1).and_then(|x| x.parse::<usize>().ok()).filter(|&k| k >= 1);
                            let Some(k) = k else {
                                return perr(n, format!("expected '{g} <strand>'"));
                            };
                            let list = if g == "dot" { &mut t.dots } else { &mut t.psis };
                            if k != list.len() + 1 {
                                return perr(n, format!("{g} matrices must be listed in order; expected {}", list.len() + 1));
                            }
                            list.push(m);
                        }
                    }
                }
                "bubble" => {
                    if toks.len() != 5 || toks[3] != "maxdeg" {
                        return perr(n, "expected 'bubble <vertex> <weight> maxdeg <n>'");
                    }
                    let i = self.vertex(n, toks[1])?;
                    let w = c.index_of_name(toks[2]).map_or_else(|| perr(n, format!("unknown weight '{}'", toks[2])), Ok)?;
                    let max_deg = toks[4].parse::<i64>().or_else(|_| perr(n, "bad maxdeg"))?;
                    let weight = c.weights[w].weight.clone();
                    let mut series = Vec::new();
                    for rot in [Rotation::Clockwise, Rotation::Counterclockwise] {
                        let Some((ln, l)) = self.next_header() else {
                            return perr(n, format!("expected a '{rot}' line"));
                        };
                        let mut parts = l.split_whitespace();
                        if parts.next() != Some(&rot.to_string()) {
                            return perr(ln, format!("expected a '{rot}' line"));
                        }
                        let mut values = BTreeMap::new();
                        for p in parts {
                            let Some((m, v)) = p.split_once(':') else {
                                return perr(ln, format!("expected <dots>:<value>, found '{p}'"));
                            };
                            let m = m.parse::<i64>().or_else(|_| perr(ln, format!("bad dot count '{m}'")))?;
                            let v = parse_rational(v).map_or_else(|| perr(ln, format!("bad rational '{v}'")), Ok)?;
                            values.insert(m, v);
                        }
                        series.push(BubbleSeries { color: i, weight: weight.clone(), rotation: rot, values });
                    }
                    let ccw = series.pop().unwrap();
                    let cw = series.pop().unwrap();
                    c.bubbles.push(BubblePair { cw, ccw, max_deg });
                }
                other => return perr(n, format!("unknown directive '{other}'")),
            }
        }
        Ok(c)
    }
}

fn shape(line: usize, s: &str) -> Result<(usize, usize), ActionError> {
    let parsed = s.split_once('x').and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)));
    parsed.map_or_else(|| perr(line, format!("bad shape '{s}', expected <rows>x<cols>")), Ok)
}
