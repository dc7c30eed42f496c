//! Polynomials in `y_1..y_n`, divided differences, and the faithful polynomial
//! module of the quiver Hecke algebra.
//!
//! Strand indices are 0-based here; `psi(k)` in the expression grammar is `k - 1`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{format_rational, rat, Rational};
use crate::klr::{Gen, KlrElement};
use crate::rootdata::{BivariatePoly, RootDatum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyRepError {
    #[error("strand index {k} out of range for {n} strands")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("strand count mismatch: element has {element}, vector has {vector}")]
    StrandMismatch { element: usize, vector: usize },
}

/// Polynomial in `n` commuting variables with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(vec![0; n], rat(1))
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// The variable `y_k`.
    pub fn var(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        Self::monomial(e, rat(1))
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self { n: self.n, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn mul_var(&self, k: usize) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[k] += 1;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// `s_k f`: swaps `y_k` and `y_{k+1}`.
    pub fn swap(&self, k: usize) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.swap(k, k + 1);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// `(f - s_k f) / (y_k - y_{k+1})`, computed monomial by monomial.
    pub fn divided_difference(&self, k: usize) -> Result<Self, PolyRepError> {
        if k + 1 >= self.n {
            return Err(PolyRepError::IndexOutOfRange { k, n: self.n });
        }
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let (p, r) = (e[k], e[k + 1]);
            if p == r {
                continue;
            }
            // (u^p v^r - u^r v^p)/(u - v) = sign * (uv)^lo * sum_{m} u^{d-1-m} v^m
            let (lo, d, sign) = if p > r { (r, p - r, rat(1)) } else { (p, r - p, rat(-1)) };
            for m in 0..d {
                let mut x = e.clone();
                x[k] = lo + d - 1 - m;
                x[k + 1] = lo + m;
                out.add_term(x, c * &sign);
            }
        }
        Ok(out)
    }

    /// `p(y_a, y_b)` for a bivariate `p`.
    pub fn from_bivariate(n: usize, p: &BivariatePoly, a: usize, b: usize) -> Self {
        let mut out = Self::zero(n);
        for ((du, dv), c) in p.terms() {
            let mut e = vec![0; n];
            e[a] += du;
            e[b] += dv;
            out.add_term(e, c.clone());
        }
        out
    }

    /// Complete homogeneous polynomial `h_m(y_a, y_b)`; zero for negative `m`.
    pub fn complete_homogeneous(n: usize, m: i64, a: usize, b: usize) -> Self {
        let mut out = Self::zero(n);
        for k in 0..=m.max(-1) {
            let mut e = vec![0; n];
            e[a] += (m - k) as u32;
            e[b] += k as u32;
            out.add_term(e, rat(1));
        }
        out
    }

    /// Degree with `deg y_k = 2`, if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| 2 * e.iter().map(|&x| x as i64).sum::<i64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| 2 * e.iter().map(|&x| x as i64).sum::<i64>()).max()
    }

    /// All exponent vectors in `n` variables with polynomial degree `2 * total <= max_deg`.
    pub fn monomials_up_to(n: usize, max_deg: i64) -> Vec<Vec<u32>> {
        let max_total = if max_deg < 0 { return Vec::new() } else { (max_deg / 2) as u32 };
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if k == cur.len() {
                out.push(cur.clone());
                return;
            }
            for x in 0..=left {
                cur[k] = x;
                rec(k + 1, left - x, cur, out);
            }
            cur[k] = 0;
        }
        rec(0, max_total, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let mut parts = Vec::new();
            let constant = e.iter().all(|&x| x == 0);
            if !mag.is_one() || constant {
                parts.push(format_rational(&mag));
            }
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => parts.push(format!("y{}", k + 1)),
                    _ => parts.push(format!("y{}^{}", k + 1, x)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Element of `⊕_i k[y_1..y_n] e(i)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVector {
    n: usize,
    comps: BTreeMap<Vec<usize>, MultiPoly>,
}

impl PolyVector {
    pub fn zero(n: usize) -> Self {
        Self { n, comps: BTreeMap::new() }
    }

    pub fn basis(word: Vec<usize>, f: MultiPoly) -> Self {
        let mut v = Self::zero(word.len());
        v.add_component(word, f);
        v
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn add_component(&mut self, word: Vec<usize>, f: MultiPoly) {
        let cur = self.comps.remove(&word).unwrap_or_else(|| MultiPoly::zero(self.n));
        let next = cur.add(&f);
        if !next.is_zero() {
            self.comps.insert(word, next);
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> + '_ {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut v = self.clone();
        for (w, f) in &o.comps {
            v.add_component(w.clone(), f.clone());
        }
        v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut v = Self::zero(self.n);
        for (w, f) in &self.comps {
            v.add_component(w.clone(), f.scale(c));
        }
        v
    }

    fn map_components(&self, mut f: impl FnMut(&Vec<usize>, &MultiPoly) -> Option<(Vec<usize>, MultiPoly)>) -> Self {
        let mut v = Self::zero(self.n);
        for (w, p) in &self.comps {
            if let Some((w2, p2)) = f(w, p) {
                v.add_component(w2, p2);
            }
        }
        v
    }
}

/// Action of one generator. Crossings of different labels carry the factor
/// `(y_{k+1} - y_k)^{eps_{j_k j_{k+1}}}` indexed by the labels `j = s_k i`
/// after the crossing; with that placement `psi_k^2 e(i) = Q_{i_k i_{k+1}}(y_k, y_{k+1}) e(i)`.
pub fn act_gen(d: &RootDatum, g: &Gen, v: &PolyVector) -> Result<PolyVector, PolyRepError> {
    let n = v.n;
    let check = |k: usize, width: usize| {
        if k + width > n {
            Err(PolyRepError::IndexOutOfRange { k, n })
        } else {
            Ok(())
        }
    };
    match g {
        Gen::Idem(word) => {
            if word.len() != n {
                return Err(PolyRepError::StrandMismatch { element: word.len(), vector: n });
            }
            Ok(v.map_components(|w, p| (w == word).then(|| (w.clone(), p.clone()))))
        }
        Gen::Dot(k) => {
            check(*k, 1)?;
            Ok(v.map_components(|w, p| Some((w.clone(), p.mul_var(*k)))))
        }
        Gen::Poly(f) => {
            if f.nvars() != n {
                return Err(PolyRepError::StrandMismatch { element: f.nvars(), vector: n });
            }
            Ok(v.map_components(|w, p| Some((w.clone(), p.mul(f)))))
        }
        Gen::Psi(k) => {
            check(*k, 2)?;
            let k = *k;
            let mut out = PolyVector::zero(n);
            for (w, p) in &v.comps {
                if w[k] == w[k + 1] {
                    out.add_component(w.clone(), p.divided_difference(k)?);
                } else {
                    let mut t = w.clone();
                    t.swap(k, k + 1);
                    let e = d.epsilon(t[k], t[k + 1]) as u32;
                    let mut factor = MultiPoly::one(n);
                    let diff = MultiPoly::var(n, k + 1).sub(&MultiPoly::var(n, k));
                    for _ in 0..e {
                        factor = factor.mul(&diff);
                    }
                    out.add_component(t, factor.mul(&p.swap(k)));
                }
            }
            Ok(out)
        }
    }
}

/// Applies a generator string listed top to bottom (the bottom acts first).
pub fn act_string(d: &RootDatum, gens: &[Gen], v: &PolyVector) -> Result<PolyVector, PolyRepError> {
    let mut cur = v.clone();
    for g in gens.iter().rev() {
        cur = act_gen(d, g, &cur)?;
        if cur.is_zero() {
            break;
        }
    }
    Ok(cur)
}

/// Action of a normal-form element on a polynomial vector.
pub fn act_element(d: &RootDatum, x: &KlrElement, v: &PolyVector) -> Result<PolyVector, PolyRepError> {
    if x.strands() != v.n {
        return Err(PolyRepError::StrandMismatch { element: x.strands(), vector: v.n });
    }
    let mut out = PolyVector::zero(v.n);
    for (b, c) in x.terms() {
        let w = act_string(d, &b.to_gens(), v)?;
        out = out.add(&w.scale(c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(n: usize, e: &[u32]) -> MultiPoly {
        assert_eq!(e.len(), n);
        MultiPoly::monomial(e.to_vec(), rat(1))
    }

    #[test]
    fn divided_difference_examples() {
        assert_eq!(y(2, &[1, 0]).divided_difference(0).unwrap(), MultiPoly::one(2));
        assert!(y(2, &[1, 1]).divided_difference(0).unwrap().is_zero());
        assert_eq!(y(2, &[2, 0]).divided_difference(0).unwrap(), y(2, &[1, 0]).add(&y(2, &[0, 1])));
        assert!(y(2, &[1, 0]).divided_difference(1).is_err());
    }

    #[test]
    fn generator_examples() {
        let d = RootDatum::type_a(2);
        let v = PolyVector::basis(vec![1, 0], MultiPoly::one(2));
        assert!(act_gen(&d, &Gen::Idem(vec![0, 1]), &v).unwrap().is_zero());
        let u = PolyVector::basis(vec![0, 0], MultiPoly::one(2));
        assert_eq!(act_gen(&d, &Gen::Dot(0), &u).unwrap(), PolyVector::basis(vec![0, 0], y(2, &[1, 0])));
        let w = PolyVector::basis(vec![0, 0], y(2, &[1, 0]));
        assert_eq!(act_gen(&d, &Gen::Psi(0), &w).unwrap(), u);
    }

    #[test]
    fn double_crossing_realizes_q() {
        let d = RootDatum::type_a(2);
        let one = PolyVector::basis(vec![0, 1], MultiPoly::one(2));
        let twice = act_string(&d, &[Gen::Psi(0), Gen::Psi(0)], &one).unwrap();
        let q = MultiPoly::from_bivariate(2, &d.q_polynomial(0, 1).unwrap(), 0, 1);
        assert_eq!(twice, PolyVector::basis(vec![0, 1], q));
    }

    #[test]
    fn printing() {
        let p = y(2, &[2, 0]).add(&y(2, &[0, 1]).scale(&rat(-3))).add(&MultiPoly::one(2));
        assert_eq!(p.to_string(), "y1^2 - 3*y2 + 1");
    }
}
