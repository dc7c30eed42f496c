//! Diagram expressions such as `2*psi(1)*y(2)*e(1 2) - 1/2*e(2 1)`.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' integer]
//! atom   := integer ['/' integer] | 'e(' labels ')' | 'y(' k ')' | 'psi(' k ')' | '(' expr ')'
//! ```
//!
//! Strand indices are 1-based. Labels inside `e(...)` are separated by spaces
//! or commas; an unseparated run like `e(12)` splits into characters when it is
//! not itself a vertex name. Whitespace is ignored everywhere else.

use num_bigint::BigInt;
use thiserror::Error;

use super::{rearrangements, Gen, GenTerm, KlrElement, RewriteError, Rewriter};
use crate::algebra::{rat, Rational};
use crate::rootdata::RootDatum;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {pos}: expected {expected}, found {found}")]
pub struct ParseError {
    pub pos: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown vertex {0:?} in idempotent")]
    UnknownVertex(String),
    #[error("term {0} has no idempotent e(...), so its strand count is unknown")]
    NoIdempotent(String),
    #[error("strand index {index} out of range for {n} strands")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("terms disagree on strand count: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("idempotents in one term have different content")]
    ContentMismatch,
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// A generator as written, before labels are resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Idem(Vec<String>),
    Dot(usize),
    Psi(usize),
}

/// Sum of coefficient times product of factors, already expanded.
pub type Expr = Vec<(Rational, Vec<Factor>)>;

struct Parser<'s> {
    chars: Vec<(usize, char)>,
    at: usize,
    src: &'s str,
}

impl<'s> Parser<'s> {
    fn new(src: &'s str) -> Self {
        Self { chars: src.char_indices().collect(), at: 0, src }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.at).is_some_and(|(_, c)| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.src.len(), |&(p, _)| p)
    }

    fn err(&mut self, expected: &str) -> ParseError {
        self.skip_ws();
        let found = match self.chars.get(self.at) {
            Some(&(_, c)) => format!("{c:?}"),
            None => "end of input".to_string(),
        };
        ParseError { pos: self.pos(), expected: expected.to_string(), found }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("{c:?}")))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let n = kw.chars().count();
        let got: String = self.chars[self.at..].iter().take(n).map(|&(_, c)| c).collect();
        if got == kw {
            self.at += n;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.at;
        while self.chars.get(self.at).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.at += 1;
        }
        if start == self.at {
            return Err(self.err("integer"));
        }
        let s: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        Ok(s.parse().expect("digits"))
    }

    fn small(&mut self) -> Result<usize, ParseError> {
        let save = self.at;
        let v = self.integer()?;
        usize::try_from(v).map_err(|_| {
            self.at = save;
            self.err("small integer")
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut out: Expr = Vec::new();
        let mut sign = rat(1);
        if self.eat('-') {
            sign = rat(-1);
        } else {
            self.eat('+');
        }
        loop {
            for (c, f) in self.term()? {
                out.push((c * &sign, f));
            }
            if self.eat('+') {
                sign = rat(1);
            } else if self.eat('-') {
                sign = rat(-1);
            } else {
                return Ok(out);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let rhs = self.factor()?;
            acc = product(&acc, &rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.small()?;
            let mut acc: Expr = vec![(rat(1), Vec::new())];
            for _ in 0..k {
                acc = product(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let d = if self.eat('/') { self.integer()? } else { BigInt::from(1) };
                if d == BigInt::from(0) {
                    return Err(self.err("nonzero denominator"));
                }
                Ok(vec![(Rational::new(n, d), Vec::new())])
            }
            Some('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => {
                let f = if self.keyword("psi") {
                    self.expect('(')?;
                    let k = self.small()?;
                    self.expect(')')?;
                    Factor::Psi(k)
                } else if self.keyword("y") {
                    self.expect('(')?;
                    let k = self.small()?;
                    self.expect(')')?;
                    Factor::Dot(k)
                } else if self.keyword("e") {
                    self.expect('(')?;
                    Factor::Idem(self.labels()?)
                } else {
                    return Err(self.err("number, e(...), y(k), psi(k) or '('"));
                };
                Ok(vec![(rat(1), vec![f])])
            }
        }
    }

    fn labels(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = Vec::new();
        let mut cur = String::new();
        loop {
            let Some(&(_, c)) = self.chars.get(self.at) else {
                return Err(self.err("')'"));
            };
            self.at += 1;
            match c {
                ')' => break,
                c if c.is_whitespace() || c == ',' => {
                    if !cur.is_empty() {
                        out.push(std::mem::take(&mut cur));
                    }
                }
                c if c.is_alphanumeric() || c == '_' => cur.push(c),
                _ => {
                    self.at -= 1;
                    return Err(self.err("vertex label"));
                }
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        Ok(out)
    }
}

fn product(a: &Expr, b: &Expr) -> Expr {
    let mut out = Vec::new();
    for (c1, f1) in a {
        for (c2, f2) in b {
            let mut f = f1.clone();
            f.extend(f2.iter().cloned());
            out.push((c1 * c2, f));
        }
    }
    out
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("'+', '-', '*' or end of input"));
    }
    Ok(e)
}

fn resolve_labels(d: &RootDatum, labels: &[String]) -> Result<Vec<usize>, ExprError> {
    if labels.len() == 1 && d.index_of(&labels[0]).is_none() {
        // e(12): one run of single-character labels
        let chars: Vec<String> = labels[0].chars().map(|c| c.to_string()).collect();
        if chars.len() > 1 && chars.iter().all(|c| d.index_of(c).is_some()) {
            return Ok(chars.iter().map(|c| d.index_of(c).unwrap()).collect());
        }
    }
    labels.iter().map(|l| d.index_of(l).ok_or_else(|| ExprError::UnknownVertex(l.clone()))).collect()
}

/// Resolves labels and converts to 0-based generator strings.
pub fn resolve(d: &RootDatum, e: &Expr) -> Result<Vec<GenTerm>, ExprError> {
    let mut out = Vec::new();
    for (c, factors) in e {
        let mut gens = Vec::new();
        for f in factors {
            gens.push(match f {
                Factor::Idem(ls) => Gen::Idem(resolve_labels(d, ls)?),
                Factor::Dot(k) => Gen::Dot(one_based(*k)?),
                Factor::Psi(k) => Gen::Psi(one_based(*k)?),
            });
        }
        out.push((c.clone(), gens));
    }
    Ok(out)
}

fn one_based(k: usize) -> Result<usize, ExprError> {
    k.checked_sub(1).ok_or(ExprError::IndexOutOfRange { index: 0, n: 0 })
}

/// Evaluates resolved terms to a normal-form element. A term ending in `e(i)`
/// is applied to `e(i)`; otherwise it is applied to the sum of all `e(j)` with
/// the content of its idempotents.
pub fn evaluate_terms(rw: &Rewriter, d: &RootDatum, terms: &[GenTerm]) -> Result<KlrElement, ExprError> {
    let mut out: Option<KlrElement> = None;
    for (c, gens) in terms {
        let idems: Vec<&Vec<usize>> = gens
            .iter()
            .filter_map(|g| match g {
                Gen::Idem(w) => Some(w),
                _ => None,
            })
            .collect();
        let Some(first) = idems.first() else {
            return Err(ExprError::NoIdempotent(super::gens_display(d, gens)));
        };
        let n = first.len();
        let mut content = first.to_vec();
        content.sort_unstable();
        for w in &idems {
            if w.len() != n {
                return Err(ExprError::StrandMismatch(w.len(), n));
            }
            let mut s = w.to_vec();
            s.sort_unstable();
            if s != content {
                return Err(ExprError::ContentMismatch);
            }
        }
        for g in gens {
            if let Gen::Dot(k) | Gen::Psi(k) = g {
                let width = if matches!(g, Gen::Psi(_)) { 2 } else { 1 };
                if k + width > n {
                    return Err(ExprError::IndexOutOfRange { index: k + 1, n });
                }
            }
        }
        let value = match gens.last() {
            Some(Gen::Idem(w)) => rw.normalize(&gens[..gens.len() - 1], w)?,
            _ => {
                let mut acc = KlrElement::zero(n);
                for w in rearrangements(first) {
                    acc = acc.add(&rw.normalize(gens, &w)?);
                }
                acc
            }
        };
        match &mut out {
            None => out = Some(value.scale(c)),
            Some(acc) => {
                if acc.strands() != n {
                    return Err(ExprError::StrandMismatch(acc.strands(), n));
                }
                acc.add_assign(&value, c);
            }
        }
    }
    Ok(out.unwrap_or_else(|| KlrElement::zero(0)))
}

/// Parses and evaluates an expression.
pub fn evaluate(d: &RootDatum, src: &str) -> Result<KlrElement, ExprError> {
    let e = parse(src)?;
    let terms = resolve(d, &e)?;
    evaluate_terms(&Rewriter::new(d), d, &terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products_and_sums() {
        let e = parse("2*psi(1) * y(2)*e(1 2) - 1/2*e(2,1)").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].0, rat(2));
        assert_eq!(e[0].1, vec![Factor::Psi(1), Factor::Dot(2), Factor::Idem(vec!["1".into(), "2".into()])]);
        assert_eq!(e[1].0, crate::algebra::ratio(-1, 2));
        let p = parse("(1 + y(1))^2 * e(1)").unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn reports_position_and_expectation() {
        let err = parse("psi(1)*+e(1 1)").unwrap_err();
        assert_eq!(err.pos, 7);
        assert!(err.expected.contains("psi(k)"));
        let err = parse("psi(1").unwrap_err();
        assert_eq!(err.expected, "')'");
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn evaluates_double_crossings() {
        let d = RootDatum::type_a(2);
        assert!(evaluate(&d, "psi(1)*psi(1)*e(1 1)").unwrap().is_zero());
        let q = evaluate(&d, "psi(1)*psi(1)*e(12)").unwrap();
        assert_eq!(q.display(&d), "y(2)*e(1 2) - y(1)*e(1 2)");
        let sum = evaluate(&d, "y(1)*e(1 2) + e(2 1)").unwrap();
        assert_eq!(sum.len(), 2);
    }

    #[test]
    fn idempotent_in_the_middle_sums_over_content() {
        let d = RootDatum::type_a(2);
        let x = evaluate(&d, "e(1 2)*psi(1)").unwrap();
        assert_eq!(x.display(&d), "psi(1)*e(2 1)");
        assert!(matches!(evaluate(&d, "psi(1)"), Err(ExprError::NoIdempotent(_))));
        assert!(matches!(evaluate(&d, "psi(2)*e(1 2)"), Err(ExprError::IndexOutOfRange { .. })));
        assert!(matches!(evaluate(&d, "e(1 3)"), Err(ExprError::UnknownVertex(_))));
    }
}
