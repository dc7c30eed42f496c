//! Products in the normal-form basis by rewriting.
//!
//! Every product is built by stacking one generator at a time on top of a
//! normal-form element. Stacking `psi_k` on `y^a psi_w e(i)` first moves the
//! crossing through the dots,
//!
//! ```text
//! psi_k f = (s_k f) psi_k + [i_k = i_{k+1}] d_k(f),
//! ```
//!
//! then rewrites `psi_k psi_w` into the canonical reduced word by commutations
//! and braid moves. Double crossings collapse to `Q_ij(y_k, y_{k+1})` or `0`; the
//! braid move on labels `(x, y, x)` with `x != y` leaves the correction
//!
//! ```text
//! psi_a psi_{a+1} psi_a - psi_{a+1} psi_a psi_{a+1}
//!     = (Q_xy(y_a, y_{a+1}) - Q_xy(y_{a+2}, y_{a+1})) / (y_a - y_{a+2}).
//! ```
//!
//! Every correction has fewer crossings than the term it came from, which is
//! what makes the recursion terminate. A step counter guards it anyway.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use thiserror::Error;

use super::perm::{self, Perm};
use super::{BasisElem, Gen, GenTerm, KlrElement};
use crate::algebra::{rat, Rational};
use crate::polyrep::MultiPoly;
use crate::rootdata::RootDatum;

pub const DEFAULT_STEP_LIMIT: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("rewriting exceeded {0} steps without reaching normal form")]
    StepLimit(usize),
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("generator {gen} out of range for {n} strands")]
    OutOfRange { gen: String, n: usize },
}

type Result<T> = std::result::Result<T, RewriteError>;

/// Crossing index, permutation and word of a memoized product.
type MemoKey = (usize, Perm, Vec<usize>);

/// Rewriting engine bound to one root datum; caches crossing products.
pub struct Rewriter<'a> {
    d: &'a RootDatum,
    steps: Cell<usize>,
    limit: usize,
    memo: RefCell<HashMap<MemoKey, KlrElement>>,
}

impl<'a> Rewriter<'a> {
    pub fn new(d: &'a RootDatum) -> Self {
        Self::with_limit(d, DEFAULT_STEP_LIMIT)
    }

    pub fn with_limit(d: &'a RootDatum, limit: usize) -> Self {
        Self { d, steps: Cell::new(0), limit, memo: RefCell::new(HashMap::new()) }
    }

    pub fn datum(&self) -> &RootDatum {
        self.d
    }

    /// Steps taken so far across all calls.
    pub fn steps(&self) -> usize {
        self.steps.get()
    }

    fn tick(&self) -> Result<()> {
        let s = self.steps.get() + 1;
        self.steps.set(s);
        if s > self.limit {
            return Err(RewriteError::StepLimit(self.limit));
        }
        Ok(())
    }

    /// `x * y` in the normal-form basis.
    pub fn multiply(&self, x: &KlrElement, y: &KlrElement) -> Result<KlrElement> {
        if x.strands() != y.strands() {
            return Err(RewriteError::StrandMismatch { left: x.strands(), right: y.strands() });
        }
        let mut out = KlrElement::zero(x.strands());
        for (b, c) in x.terms() {
            let r = self.left_mul_basis(b, y)?;
            out.add_assign(&r, c);
        }
        Ok(out)
    }

    fn left_mul_basis(&self, b: &BasisElem, y: &KlrElement) -> Result<KlrElement> {
        let mut r = self.left_mul(&Gen::Idem(b.word.clone()), y)?;
        for c in b.reduced_word().into_iter().rev() {
            if r.is_zero() {
                break;
            }
            r = self.left_mul(&Gen::Psi(c), &r)?;
        }
        Ok(r.mul_poly_top(&MultiPoly::monomial(b.dots.clone(), rat(1))))
    }

    /// Normal form of a generator string (top to bottom) applied to `e(word)`.
    pub fn normalize(&self, gens: &[Gen], word: &[usize]) -> Result<KlrElement> {
        let mut acc = KlrElement::idempotent(word.to_vec());
        for g in gens.iter().rev() {
            if acc.is_zero() {
                break;
            }
            acc = self.left_mul(g, &acc)?;
        }
        Ok(acc)
    }

    /// Normal form of a linear combination of strings, each applied to `e(word)`.
    pub fn normalize_terms(&self, terms: &[GenTerm], word: &[usize]) -> Result<KlrElement> {
        let mut out = KlrElement::zero(word.len());
        for (c, gens) in terms {
            let r = self.normalize(gens, word)?;
            out.add_assign(&r, c);
        }
        Ok(out)
    }

    /// Stacks one generator on top of a normal-form element.
    pub fn left_mul(&self, g: &Gen, x: &KlrElement) -> Result<KlrElement> {
        let n = x.strands();
        let out_of_range = || RewriteError::OutOfRange { gen: g.to_string(), n };
        match g {
            Gen::Idem(w) => {
                if w.len() != n {
                    return Err(RewriteError::StrandMismatch { left: w.len(), right: n });
                }
                let mut out = KlrElement::zero(n);
                for (b, c) in x.terms() {
                    if &b.top_word() == w {
                        out.add_term(b.clone(), c.clone());
                    }
                }
                Ok(out)
            }
            Gen::Dot(k) => {
                if *k >= n {
                    return Err(out_of_range());
                }
                Ok(x.mul_poly_top(&MultiPoly::var(n, *k)))
            }
            Gen::Poly(f) => {
                if f.nvars() != n {
                    return Err(RewriteError::StrandMismatch { left: f.nvars(), right: n });
                }
                Ok(x.mul_poly_top(f))
            }
            Gen::Psi(k) => {
                let k = *k;
                if k + 1 >= n {
                    return Err(out_of_range());
                }
                let mut out = KlrElement::zero(n);
                for (b, c) in x.terms() {
                    self.tick()?;
                    let top = b.top_word();
                    let dots = MultiPoly::monomial(b.dots.clone(), rat(1));
                    let crossed = self.psi_on_canon(k, &b.perm, &b.word)?;
                    out.add_assign(&crossed.mul_poly_top(&dots.swap(k)), c);
                    if top[k] == top[k + 1] {
                        let dd = dots.divided_difference(k).expect("index checked above");
                        if !dd.is_zero() {
                            let pure = BasisElem { dots: vec![0; n], perm: b.perm.clone(), word: b.word.clone() };
                            out.add_assign(&KlrElement::basis(pure).mul_poly_top(&dd), c);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// `psi_k psi_w e(word)` with `psi_w` canonical.
    fn psi_on_canon(&self, k: usize, t: &[usize], word: &[usize]) -> Result<KlrElement> {
        let key = (k, t.to_vec(), word.to_vec());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let n = word.len();
        let result = if perm::lengthens(t, k) {
            let st = perm::apply_top(t, k);
            if perm::min_left_descent(&st) == Some(k) {
                KlrElement::basis(BasisElem { dots: vec![0; n], perm: st, word: word.to_vec() })
            } else {
                let mut w = vec![k];
                w.extend(perm::canonical_word(t));
                self.normalize_reduced(&w, word)?
            }
        } else {
            let r = perm::canonical_word(t);
            let (main, corrections) = self.bring_to_front(&r, k, word)?;
            let rest = &main[1..];
            let below = perm::top_word(&perm::perm_of_word(n, rest), word);
            let mut out = KlrElement::zero(n);
            if below[k] != below[k + 1] {
                let q = self.d.q_polynomial(below[k], below[k + 1]).expect("labels differ");
                let q = MultiPoly::from_bivariate(n, &q, k, k + 1);
                out = self.normalize_reduced(rest, word)?.mul_poly_top(&q);
            }
            for (c, gens) in &corrections {
                let inner = self.normalize(gens, word)?;
                let r = self.left_mul(&Gen::Psi(k), &inner)?;
                out.add_assign(&r, c);
            }
            out
        };
        self.memo.borrow_mut().insert(key, result.clone());
        Ok(result)
    }

    /// Normal form of `psi_W e(word)` for a reduced word `W`.
    fn normalize_reduced(&self, w: &[usize], word: &[usize]) -> Result<KlrElement> {
        if w.is_empty() {
            return Ok(KlrElement::idempotent(word.to_vec()));
        }
        let n = word.len();
        let t = perm::perm_of_word(n, w);
        let c = perm::min_left_descent(&t).expect("nonempty reduced word has a descent");
        let (main, corrections) = self.bring_to_front(w, c, word)?;
        let tail = self.normalize_reduced(&main[1..], word)?;
        let mut out = self.left_mul(&Gen::Psi(c), &tail)?;
        for (coef, gens) in &corrections {
            let r = self.normalize(gens, word)?;
            out.add_assign(&r, coef);
        }
        Ok(out)
    }

    /// Rewrites the reduced word `w` (a left descent `s` of its permutation) as
    /// `[s] ++ rest` plus correction strings with fewer crossings.
    fn bring_to_front(&self, w: &[usize], s: usize, word: &[usize]) -> Result<(Vec<usize>, Vec<GenTerm>)> {
        self.tick()?;
        let t = w[0];
        if t == s {
            return Ok((w.to_vec(), Vec::new()));
        }
        let n = word.len();
        let (main1, corr1) = self.bring_to_front(&w[1..], s, word)?;
        let mut corrections: Vec<GenTerm> = prepend(&[Gen::Psi(t)], corr1);
        if t.abs_diff(s) > 1 {
            let mut main = vec![s, t];
            main.extend_from_slice(&main1[1..]);
            return Ok((main, corrections));
        }
        let (main2, corr2) = self.bring_to_front(&main1[1..], t, word)?;
        corrections.extend(prepend(&[Gen::Psi(t), Gen::Psi(s)], corr2));
        let y = &main2[1..];
        let below = perm::top_word(&perm::perm_of_word(n, y), word);
        let a = s.min(t);
        if below[a] == below[a + 2] && below[a] != below[a + 1] {
            let c = self.braid_correction(n, a, below[a], below[a + 1]);
            // t s t -> s t s; the correction's sign depends on which side is `a a+1 a`.
            let sign = if t == a { rat(1) } else { rat(-1) };
            let mut gens = vec![Gen::Poly(c)];
            gens.extend(y.iter().map(|&k| Gen::Psi(k)));
            corrections.push((sign, gens));
        }
        let mut main = vec![s, t, s];
        main.extend_from_slice(y);
        Ok((main, corrections))
    }

    /// `(Q_xy(y_a, y_{a+1}) - Q_xy(y_{a+2}, y_{a+1})) / (y_a - y_{a+2})`, expanded as
    /// `sum c_mn y_{a+1}^n h_{m-1}(y_a, y_{a+2})` for `Q = sum c_mn u^m v^n`.
    fn braid_correction(&self, n: usize, a: usize, x: usize, y: usize) -> MultiPoly {
        let q = self.d.q_polynomial(x, y).expect("labels differ");
        let mut out = MultiPoly::zero(n);
        for ((m, k), c) in q.terms() {
            if m == 0 {
                continue;
            }
            let h = MultiPoly::complete_homogeneous(n, m as i64 - 1, a, a + 2);
            let mut v = vec![0u32; n];
            v[a + 1] = k;
            out = out.add(&h.mul(&MultiPoly::monomial(v, c.clone())));
        }
        out
    }

    pub fn cache_len(&self) -> usize {
        self.memo.borrow().len()
    }
}

fn prepend(head: &[Gen], terms: Vec<GenTerm>) -> Vec<GenTerm> {
    terms
        .into_iter()
        .map(|(c, g)| {
            let mut v = head.to_vec();
            v.extend(g);
            (c, v)
        })
        .collect()
}

/// Convenience: normal form of `gens * e(word)` with a fresh engine.
pub fn normal_form(d: &RootDatum, gens: &[Gen], word: &[usize]) -> Result<KlrElement> {
    Rewriter::new(d).normalize(gens, word)
}

/// Scalar multiple of a generator string.
pub fn term(c: i64, gens: Vec<Gen>) -> GenTerm {
    (Rational::from_integer(c.into()), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::klr::{all_words, perm};
    use crate::polyrep::{act_element, PolyVector};

    fn basis_up_to(n: usize, pool: &[usize], max_dots: u32) -> Vec<BasisElem> {
        let mut out = Vec::new();
        for word in all_words(pool, n) {
            for t in perm::all_perms(n) {
                for exps in MultiPoly::monomials_up_to(n, 2 * max_dots as i64) {
                    out.push(BasisElem { dots: exps, perm: t.clone(), word: word.clone() });
                }
            }
        }
        out
    }

    fn agree(d: &RootDatum, rw: &Rewriter, x: &BasisElem, y: &BasisElem) {
        let n = x.strands();
        let (ex, ey) = (KlrElement::basis(x.clone()), KlrElement::basis(y.clone()));
        let prod = rw.multiply(&ex, &ey).unwrap();
        for word in all_words(&[0, 1], n) {
            for m in MultiPoly::monomials_up_to(n, 4) {
                let v = PolyVector::basis(word.clone(), MultiPoly::monomial(m, rat(1)));
                let lhs = act_element(d, &prod, &v).unwrap();
                let rhs = act_element(d, &ex, &act_element(d, &ey, &v).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{} * {}", x.display(d), y.display(d));
            }
        }
    }

    #[test]
    fn products_agree_with_polynomial_action_a2() {
        let d = RootDatum::type_a(2);
        let rw = Rewriter::new(&d);
        let basis = basis_up_to(3, &[0, 1], 1);
        for x in basis.iter().step_by(7) {
            for y in basis.iter().step_by(11) {
                if x.word == y.top_word() {
                    agree(&d, &rw, x, y);
                }
            }
        }
    }

    #[test]
    fn nil_hecke_square_vanishes() {
        let d = RootDatum::type_a(1);
        let r = normal_form(&d, &[Gen::Psi(0), Gen::Psi(0)], &[0, 0]).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn a2_double_crossing_is_q() {
        let d = RootDatum::type_a(2);
        let r = normal_form(&d, &[Gen::Psi(0), Gen::Psi(0)], &[0, 1]).unwrap();
        let q = MultiPoly::from_bivariate(2, &d.q_polynomial(0, 1).unwrap(), 0, 1);
        assert_eq!(r, KlrElement::idempotent(vec![0, 1]).mul_poly_top(&q));
    }
}
