//! Oriented string diagrams as stacks of layers, with their degrees.
//!
//! Diagrams are read bottom to top. Upward strands are `E_i`, downward ones
//! `F_i`. Regions carry weights; the rightmost region is the domain weight and
//! crossing an `E_i` strand from right to left adds `alpha_i` (an `F_i` strand
//! subtracts it). With this rule every zigzag has degree 0.

use thiserror::Error;

use crate::rootdata::{RootDatum, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orient {
    Up,
    Down,
}

/// One strand of an interface: `E_i` (up) or `F_i` (down).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strand {
    pub color: usize,
    pub orient: Orient,
}

impl Strand {
    pub fn e(color: usize) -> Self {
        Self { color, orient: Orient::Up }
    }

    pub fn f(color: usize) -> Self {
        Self { color, orient: Orient::Down }
    }

    /// Root-lattice sign of the strand: `+1` for `E`, `-1` for `F`.
    fn sign(self) -> i64 {
        match self.orient {
            Orient::Up => 1,
            Orient::Down => -1,
        }
    }
}

/// A 1-morphism `X_1 ... X_n 1_mu`; the rightmost symbol acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneMorWord {
    pub symbols: Vec<Strand>,
    pub domain: Weight,
}

impl OneMorWord {
    pub fn codomain(&self, d: &RootDatum) -> Weight {
        self.domain.add(&d.root_to_weight(&one_mor_weight(d, &self.symbols)))
    }

    /// Region weights from left to right; the last entry is the domain.
    pub fn regions(&self, d: &RootDatum) -> Vec<Weight> {
        region_weights(d, &self.symbols, &self.domain)
    }
}

/// `sum +-alpha_i` over the symbols, as root-lattice coefficients.
pub fn one_mor_weight(d: &RootDatum, symbols: &[Strand]) -> Vec<i64> {
    let mut v = vec![0; d.rank()];
    for s in symbols {
        v[s.color] += s.sign();
    }
    v
}

fn region_weights(d: &RootDatum, strands: &[Strand], right: &Weight) -> Vec<Weight> {
    let mut out = vec![right.clone()];
    for s in strands.iter().rev() {
        let last = out.last().unwrap();
        out.push(last.add(&d.simple_root(s.color).scale(s.sign())));
    }
    out.reverse();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CupKind {
    /// `iota : 1 -> F_i E_i`
    Iota,
    /// `iota' : 1 -> E_i F_i`
    IotaPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CapKind {
    /// `eps : E_i F_i -> 1`
    Eps,
    /// `eps' : F_i E_i -> 1`
    EpsPrime,
}

/// An elementary generator placed on the bottom interface of its layer.
/// Positions are 0-based strand indices; a cup at `pos` is inserted before strand `pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Dot { pos: usize },
    Cross { pos: usize },
    Cup { pos: usize, color: usize, kind: CupKind },
    Cap { pos: usize, kind: CapKind },
}

impl Generator {
    fn pos(&self) -> usize {
        match *self {
            Generator::Dot { pos } | Generator::Cross { pos } | Generator::Cup { pos, .. } | Generator::Cap { pos, .. } => {
                pos
            }
        }
    }

    /// Number of bottom strands consumed.
    fn width(&self) -> usize {
        match self {
            Generator::Dot { .. } => 1,
            Generator::Cross { .. } | Generator::Cap { .. } => 2,
            Generator::Cup { .. } => 0,
        }
    }

    fn with_pos(self, pos: usize) -> Self {
        match self {
            Generator::Dot { .. } => Generator::Dot { pos },
            Generator::Cross { .. } => Generator::Cross { pos },
            Generator::Cup { color, kind, .. } => Generator::Cup { pos, color, kind },
            Generator::Cap { kind, .. } => Generator::Cap { pos, kind },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layer {
    pub gens: Vec<Generator>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringDiagram {
    pub bottom: Vec<Strand>,
    /// Weight of the rightmost region, which no generator changes.
    pub right: Weight,
    pub layers: Vec<Layer>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("layer {layer}, position {pos}: {detail}")]
    BadInterface { layer: usize, pos: usize, detail: String },
    #[error("weight has {got} coordinates, expected {expected}")]
    Arity { got: usize, expected: usize },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn bad(layer: usize, pos: usize, detail: impl Into<String>) -> DiagramError {
    DiagramError::BadInterface { layer: layer + 1, pos: pos + 1, detail: detail.into() }
}

impl StringDiagram {
    /// Applies every layer, returning the interfaces from bottom to top and the total degree.
    pub fn check(&self, d: &RootDatum) -> Result<(Vec<Vec<Strand>>, i64), DiagramError> {
        if self.right.0.len() != d.rank() {
            return Err(DiagramError::Arity { got: self.right.0.len(), expected: d.rank() });
        }
        let mut cur = self.bottom.clone();
        if let Some(s) = cur.iter().find(|s| s.color >= d.rank()) {
            return Err(bad(0, 0, format!("unknown color {}", s.color)));
        }
        let mut interfaces = vec![cur.clone()];
        let mut degree = 0;
        for (li, layer) in self.layers.iter().enumerate() {
            let (next, deg) = apply_layer(d, li, &cur, &self.right, layer)?;
            degree += deg;
            cur = next;
            interfaces.push(cur.clone());
        }
        Ok((interfaces, degree))
    }

    pub fn degree(&self, d: &RootDatum) -> Result<i64, DiagramError> {
        self.check(d).map(|(_, deg)| deg)
    }

    pub fn top(&self, d: &RootDatum) -> Result<Vec<Strand>, DiagramError> {
        self.check(d).map(|(mut i, _)| i.pop().unwrap())
    }

    /// Splits every layer into one layer per generator, applied left to right
    /// (or right to left), shifting positions to account for width changes.
    pub fn sequentialize(&self, left_first: bool) -> StringDiagram {
        let mut layers = Vec::new();
        for layer in &self.layers {
            let mut gens = layer.gens.clone();
            gens.sort_by_key(|g| (g.pos(), g.width()));
            if left_first {
                let mut shift: isize = 0;
                for g in gens {
                    let p = (g.pos() as isize + shift) as usize;
                    layers.push(Layer { gens: vec![g.with_pos(p)] });
                    shift += match g {
                        Generator::Cup { .. } => 2,
                        Generator::Cap { .. } => -2,
                        _ => 0,
                    };
                }
            } else {
                // Generators to the right do not move those to their left.
                for g in gens.into_iter().rev() {
                    layers.push(Layer { gens: vec![g] });
                }
            }
        }
        StringDiagram { bottom: self.bottom.clone(), right: self.right.clone(), layers }
    }
}

fn pairing(w: &Weight, i: usize) -> i64 {
    w.0[i]
}

fn apply_layer(
    d: &RootDatum,
    li: usize,
    cur: &[Strand],
    right: &Weight,
    layer: &Layer,
) -> Result<(Vec<Strand>, i64), DiagramError> {
    let regions = region_weights(d, cur, right);
    let mut gens = layer.gens.clone();
    gens.sort_by_key(|g| (g.pos(), g.width()));
    let mut out = Vec::new();
    let mut next = 0usize;
    let mut degree = 0;
    let mut last_cup = None;
    for g in &gens {
        let p = g.pos();
        let twin_cup = g.width() == 0 && last_cup == Some(p);
        if p < next || twin_cup {
            return Err(bad(li, p, "generators overlap"));
        }
        if g.width() == 0 {
            last_cup = Some(p);
        }
        if p + g.width() > cur.len() {
            return Err(bad(li, p, format!("needs {} strand(s) but the interface has {}", g.width(), cur.len())));
        }
        out.extend_from_slice(&cur[next..p]);
        match *g {
            Generator::Dot { .. } => {
                out.push(cur[p]);
                degree += 2 * d.d(cur[p].color);
            }
            Generator::Cross { .. } => {
                let (a, b) = (cur[p], cur[p + 1]);
                if a.orient == b.orient {
                    degree -= d.cartan(a.color, b.color);
                }
                out.push(b);
                out.push(a);
            }
            Generator::Cup { color, kind, .. } => {
                if color >= d.rank() {
                    return Err(bad(li, p, format!("unknown color {color}")));
                }
                // Region to the right of the new pair is the current region at p.
                let r = &regions[p];
                let (pair, deg) = match kind {
                    CupKind::Iota => {
                        let inner = r.add(&d.simple_root(color));
                        ([Strand::f(color), Strand::e(color)], pairing(&inner, color) - d.d(color))
                    }
                    CupKind::IotaPrime => {
                        let inner = r.sub(&d.simple_root(color));
                        ([Strand::e(color), Strand::f(color)], -pairing(&inner, color) - d.d(color))
                    }
                };
                out.extend_from_slice(&pair);
                degree += deg;
            }
            Generator::Cap { kind, .. } => {
                let (a, b) = (cur[p], cur[p + 1]);
                let (want, name) = match kind {
                    CapKind::Eps => ([Orient::Up, Orient::Down], "eps needs E_i F_i"),
                    CapKind::EpsPrime => ([Orient::Down, Orient::Up], "eps' needs F_i E_i"),
                };
                if a.color != b.color || [a.orient, b.orient] != want {
                    return Err(bad(li, p, name));
                }
                let inner = &regions[p + 1];
                degree += match kind {
                    CapKind::Eps => -pairing(inner, a.color) - d.d(a.color),
                    CapKind::EpsPrime => pairing(inner, a.color) - d.d(a.color),
                };
            }
        }
        next = p + g.width();
    }
    out.extend_from_slice(&cur[next..]);
    Ok((out, degree))
}

/// `E<label>` or `F<label>`.
pub fn strand_string(d: &RootDatum, s: Strand) -> String {
    let c = if s.orient == Orient::Up { 'E' } else { 'F' };
    format!("{c}{}", d.label(s.color))
}

pub fn word_string(d: &RootDatum, strands: &[Strand]) -> String {
    strands.iter().map(|&s| strand_string(d, s)).collect::<Vec<_>>().join(" ")
}

fn perr(pos: usize, msg: impl Into<String>) -> DiagramError {
    DiagramError::Parse { pos, msg: msg.into() }
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(s: &str, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(st)) => {
                out.push((base + st, &s[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((base + st, &s[st..]));
    }
    out
}

fn parse_strand(d: &RootDatum, pos: usize, tok: &str) -> Result<Strand, DiagramError> {
    let orient = match tok.chars().next() {
        Some('E') => Orient::Up,
        Some('F') => Orient::Down,
        _ => return Err(perr(pos, format!("expected E<label> or F<label>, found '{tok}'"))),
    };
    let label = tok[1..].trim_start_matches('(').trim_end_matches(')');
    let color = d.index_of(label).ok_or_else(|| perr(pos, format!("unknown vertex '{label}'")))?;
    Ok(Strand { color, orient })
}

fn parse_index(pos: usize, tok: Option<&(usize, &str)>, what: &str) -> Result<usize, DiagramError> {
    let &(p, t) = tok.ok_or_else(|| perr(pos, format!("expected {what}")))?;
    match t.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k - 1),
        _ => Err(perr(p, format!("expected {what} (a positive integer), found '{t}'"))),
    }
}

/// Parses `<bottom word> @ <weight> ; <layer> ; ...`.
///
/// The bottom word lists `E<label>`/`F<label>` symbols, the weight gives the
/// coroot values of the rightmost region, and a layer is a comma-separated
/// list of `dot p`, `cross p`, `cup iota p c`, `cup iota' p c`, `cap eps p`,
/// `cap eps' p` with 1-based positions.
pub fn parse_diagram(d: &RootDatum, src: &str) -> Result<StringDiagram, DiagramError> {
    let at = src.find('@').ok_or_else(|| perr(0, "expected '@' followed by the rightmost region weight"))?;
    let bottom = tokens(&src[..at], 0)
        .into_iter()
        .map(|(p, t)| parse_strand(d, p, t))
        .collect::<Result<Vec<_>, _>>()?;
    let rest = &src[at + 1..];
    let mut parts = Vec::new();
    let mut off = at + 1;
    for piece in rest.split(';') {
        parts.push((off, piece));
        off += piece.len() + 1;
    }
    let (woff, wsrc) = parts[0];
    let mut coords = Vec::new();
    for (p, t) in tokens(&wsrc.replace(',', " "), woff) {
        coords.push(t.parse::<i64>().map_err(|_| perr(p, format!("expected an integer, found '{t}'")))?);
    }
    if coords.len() != d.rank() {
        return Err(perr(woff, format!("weight needs {} coordinate(s), found {}", d.rank(), coords.len())));
    }
    let mut layers = Vec::new();
    for &(loff, lsrc) in &parts[1..] {
        let mut layer = Layer::default();
        let mut goff = loff;
        for gsrc in lsrc.split(',') {
            let toks = tokens(gsrc, goff);
            goff += gsrc.len() + 1;
            let Some(&(p0, head)) = toks.first() else {
                continue;
            };
            let g = match head {
                "dot" => Generator::Dot { pos: parse_index(p0, toks.get(1), "a strand position")? },
                "cross" => Generator::Cross { pos: parse_index(p0, toks.get(1), "a strand position")? },
                "cup" => {
                    let kind = match toks.get(1).map(|t| t.1) {
                        Some("iota") => CupKind::Iota,
                        Some("iota'") => CupKind::IotaPrime,
                        _ => return Err(perr(p0, "expected 'iota' or 'iota'' after 'cup'")),
                    };
                    let pos = parse_index(p0, toks.get(2), "a cup position")?;
                    let &(pc, lab) = toks.get(3).ok_or_else(|| perr(p0, "expected a cup color"))?;
                    let color = d.index_of(lab).ok_or_else(|| perr(pc, format!("unknown vertex '{lab}'")))?;
                    Generator::Cup { pos, color, kind }
                }
                "cap" => {
                    let kind = match toks.get(1).map(|t| t.1) {
                        Some("eps") => CapKind::Eps,
                        Some("eps'") => CapKind::EpsPrime,
                        _ => return Err(perr(p0, "expected 'eps' or 'eps'' after 'cap'")),
                    };
                    Generator::Cap { pos: parse_index(p0, toks.get(2), "a cap position")?, kind }
                }
                other => return Err(perr(p0, format!("expected dot, cross, cup or cap, found '{other}'"))),
            };
            layer.gens.push(g);
        }
        layers.push(layer);
    }
    Ok(StringDiagram { bottom, right: Weight(coords), layers })
}
