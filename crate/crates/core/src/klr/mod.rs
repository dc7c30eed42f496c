//! Quiver Hecke algebras: normal forms, products, degrees, relation checks and
//! cyclotomic quotients.
//!
//! Products read top to bottom: `a * b` stacks `a` above `b`, so `b` acts first
//! in the polynomial module. Basis elements are `y^a psi_w e(i)` with the dots at
//! the top, `e(i)` labelling the bottom and `psi_w` the lexicographically least
//! reduced word of `w`.

pub mod cyclotomic;
pub mod expr;
pub mod perm;
pub mod relations;
pub mod rewrite;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{format_rational, rat, LaurentPoly, Rational};
use crate::polyrep::MultiPoly;
use crate::rootdata::RootDatum;

pub use perm::Perm;
pub use relations::RelationInstance;
pub use rewrite::{RewriteError, Rewriter};

/// A generator in a vertical string; indices are 0-based strand positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    Idem(Vec<usize>),
    Dot(usize),
    Psi(usize),
    /// Multiplication by a polynomial in the dots at this height.
    Poly(MultiPoly),
}

/// A string of generators listed top to bottom, with a coefficient.
pub type GenTerm = (Rational, Vec<Gen>);

/// `y^dots psi_perm e(word)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElem {
    pub dots: Vec<u32>,
    pub perm: Perm,
    pub word: Vec<usize>,
}

impl BasisElem {
    pub fn idempotent(word: Vec<usize>) -> Self {
        let n = word.len();
        Self { dots: vec![0; n], perm: perm::identity(n), word }
    }

    pub fn strands(&self) -> usize {
        self.word.len()
    }

    pub fn top_word(&self) -> Vec<usize> {
        perm::top_word(&self.perm, &self.word)
    }

    pub fn reduced_word(&self) -> Vec<usize> {
        perm::canonical_word(&self.perm)
    }

    /// Dots count 2 each; a crossing of labels `i, j` counts `-c_ij`.
    pub fn degree(&self, d: &RootDatum) -> i64 {
        let dots: i64 = self.dots.iter().map(|&a| 2 * a as i64).sum();
        let pos = perm::inverse(&self.perm);
        let mut cross = 0;
        for p in 0..self.word.len() {
            for q in p + 1..self.word.len() {
                if pos[p] > pos[q] {
                    cross -= d.cartan(self.word[p], self.word[q]);
                }
            }
        }
        dots + cross
    }

    /// The element as a generator string: dots, then crossings, then the idempotent.
    pub fn to_gens(&self) -> Vec<Gen> {
        let mut g = Vec::new();
        if self.dots.iter().any(|&a| a > 0) {
            g.push(Gen::Poly(MultiPoly::monomial(self.dots.clone(), rat(1))));
        }
        g.extend(self.reduced_word().into_iter().map(Gen::Psi));
        g.push(Gen::Idem(self.word.clone()));
        g
    }

    pub fn display(&self, d: &RootDatum) -> String {
        let mut parts = Vec::new();
        for (k, &a) in self.dots.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("y({})", k + 1)),
                _ => parts.push(format!("y({})^{}", k + 1, a)),
            }
        }
        for c in self.reduced_word() {
            parts.push(format!("psi({})", c + 1));
        }
        parts.push(format!("e({})", d.word_string(&self.word)));
        parts.join("*")
    }
}

/// Linear combination of basis elements on a fixed number of strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlrElement {
    n: usize,
    terms: BTreeMap<BasisElem, Rational>,
}

impl KlrElement {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn basis(b: BasisElem) -> Self {
        let mut x = Self::zero(b.strands());
        x.add_term(b, rat(1));
        x
    }

    pub fn idempotent(word: Vec<usize>) -> Self {
        Self::basis(BasisElem::idempotent(word))
    }

    /// `sum_i e(i)` over all rearrangements of `word`.
    pub fn content_identity(word: &[usize]) -> Self {
        let mut x = Self::zero(word.len());
        for w in rearrangements(word) {
            x.add_term(BasisElem::idempotent(w), rat(1));
        }
        x
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, b: BasisElem, c: Rational) {
        debug_assert_eq!(b.strands(), self.n);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElem, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &BasisElem) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_assign(&mut self, o: &Self, c: &Rational) {
        for (b, x) in &o.terms {
            self.add_term(b.clone(), x * c);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut x = self.clone();
        x.add_assign(o, &rat(1));
        x
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut x = self.clone();
        x.add_assign(o, &rat(-1));
        x
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut x = Self::zero(self.n);
        x.add_assign(self, c);
        x
    }

    /// Multiplies by a polynomial in the dots on top; no rewriting needed.
    pub fn mul_poly_top(&self, f: &MultiPoly) -> Self {
        let mut x = Self::zero(self.n);
        for (b, c) in &self.terms {
            for (e, fc) in f.terms() {
                let mut nb = b.clone();
                for (a, k) in nb.dots.iter_mut().zip(e) {
                    *a += k;
                }
                x.add_term(nb, c * fc);
            }
        }
        x
    }

    /// Degree if every term has the same degree.
    pub fn homogeneous_degree(&self, d: &RootDatum) -> Option<i64> {
        let mut degs = self.terms.keys().map(|b| b.degree(d));
        let first = degs.next()?;
        degs.all(|x| x == first).then_some(first)
    }

    pub fn display(&self, d: &RootDatum) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (b, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k == 0, neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            if mag != rat(1) {
                out.push_str(&format_rational(&mag));
                out.push('*');
            }
            out.push_str(&b.display(d));
        }
        out
    }
}

/// Distinct rearrangements of `word`, in lexicographic order.
pub fn rearrangements(word: &[usize]) -> Vec<Vec<usize>> {
    let mut w = word.to_vec();
    w.sort_unstable();
    let mut out = vec![w.clone()];
    loop {
        let n = w.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| w[j] > w[i]).unwrap();
        w.swap(i, j);
        w[i + 1..].reverse();
        out.push(w.clone());
    }
    out
}

/// All words of length `n` over `pool`, lexicographic.
pub fn all_words(pool: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                pool.iter().map(move |&v| {
                    let mut w = w.clone();
                    w.push(v);
                    w
                })
            })
            .collect();
    }
    out
}

/// Graded dimension of `e(j) R e(i)` truncated at `max_deg`: the sum of
/// `q^deg` over basis elements `y^a psi_w e(i)` whose top word is `j`.
pub fn graded_dim_hom(d: &RootDatum, i: &[usize], j: &[usize], max_deg: i64) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    let mut si = i.to_vec();
    let mut sj = j.to_vec();
    si.sort_unstable();
    sj.sort_unstable();
    if si != sj {
        return out;
    }
    let n = i.len();
    for t in perm::all_perms(n) {
        if perm::top_word(&t, i) != j {
            continue;
        }
        let base = BasisElem { dots: vec![0; n], perm: t, word: i.to_vec() }.degree(d);
        let mut m: i64 = 0;
        while base + 2 * m <= max_deg {
            out.add_term(base + 2 * m, rat(dot_vectors(n, m as u64) as i64));
            if n == 0 {
                break;
            }
            m += 1;
        }
    }
    out
}

/// Number of dot vectors on `n` strands with `m` dots in total.
fn dot_vectors(n: usize, m: u64) -> u64 {
    if n == 0 {
        return u64::from(m == 0);
    }
    // binomial(m + n - 1, n - 1)
    let k = (n - 1) as u64;
    (1..=k).fold(1u64, |acc, r| acc * (m + r) / r)
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Idem(w) => {
                let s: Vec<String> = w.iter().map(|x| (x + 1).to_string()).collect();
                write!(f, "e({})", s.join(" "))
            }
            Gen::Dot(k) => write!(f, "y({})", k + 1),
            Gen::Psi(k) => write!(f, "psi({})", k + 1),
            Gen::Poly(p) => write!(f, "({p})"),
        }
    }
}

/// Renders a generator string with vertex labels from `d`.
pub fn gens_display(d: &RootDatum, gens: &[Gen]) -> String {
    gens.iter()
        .map(|g| match g {
            Gen::Idem(w) => format!("e({})", d.word_string(w)),
            other => other.to_string(),
        })
        .collect::<Vec<_>>()
        .join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees() {
        let d = RootDatum::type_a(3);
        let dot = BasisElem { dots: vec![1], perm: vec![0], word: vec![0] };
        assert_eq!(dot.degree(&d), 2);
        let same = BasisElem { dots: vec![0, 0], perm: vec![1, 0], word: vec![0, 0] };
        assert_eq!(same.degree(&d), -2);
        let far = BasisElem { dots: vec![0, 0], perm: vec![1, 0], word: vec![0, 2] };
        assert_eq!(far.degree(&d), 0);
        let adj = BasisElem { dots: vec![0, 0], perm: vec![1, 0], word: vec![0, 1] };
        assert_eq!(adj.degree(&d), 1);
    }

    #[test]
    fn graded_dims() {
        let d = RootDatum::type_a(2);
        let one = graded_dim_hom(&d, &[0], &[0], 6);
        assert_eq!(one.to_string(), "q^6 + q^4 + q^2 + 1");
        assert!(graded_dim_hom(&d, &[0], &[1], 6).is_zero());
        let two = graded_dim_hom(&d, &[0, 0], &[0, 0], 0);
        assert_eq!(two.coeff(-2), rat(1));
        // identity plus the crossing with one dot on either strand
        assert_eq!(two.coeff(0), rat(3));
        assert_eq!(graded_dim_hom(&d, &[], &[], 4).to_string(), "1");
    }

    #[test]
    fn words() {
        assert_eq!(rearrangements(&[1, 0, 0]), vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(all_words(&[0, 1], 2).len(), 4);
        assert_eq!(dot_vectors(3, 2), 6);
    }
}
