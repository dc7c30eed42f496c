//! Integrable highest-weight modules `V(lambda)` over `Q(q)`, built level by
//! level from the highest weight vector.
//!
//! At depth `beta` the candidates are `F_i b` for basis vectors `b` one level
//! up. A combination of candidates is zero in `V(lambda)` exactly when every
//! `E_j` kills it (lower levels are already irreducible quotients), so the
//! weight space is the image of the candidates under `(E_j)_j` and the
//! Shapovalov form is read off from the same data.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{Field, LaurentPoly, Matrix, RatFunc};
use crate::rootdata::{quantum_factorial, quantum_integer, RootDatum, Weight};

use super::UqError;

type M = Matrix<RatFunc>;

fn qint(n: i64) -> RatFunc {
    RatFunc::from_laurent(quantum_integer(n))
}

fn qpow(n: i64) -> RatFunc {
    RatFunc::from_laurent(LaurentPoly::q_pow(n))
}

/// One weight space `lambda - beta` of `V(lambda)`.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub beta: Vec<i64>,
    pub weight: Weight,
    /// Each basis vector is `F_{w_1} ... F_{w_k} v_+` (leftmost applied last).
    pub basis_words: Vec<Vec<usize>>,
    /// Shapovalov form on the basis; nondegenerate.
    pub gram: M,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis_words.len()
    }
}

#[derive(Clone, Debug)]
pub struct IntegrableModule {
    pub lambda: Weight,
    pub depth: usize,
    /// True when some level came out empty, so every weight space is present.
    pub complete: bool,
    spaces: BTreeMap<Vec<i64>, WeightSpace>,
    /// `E_i` on the space at `beta`, landing at `beta - alpha_i`.
    e: BTreeMap<(usize, Vec<i64>), M>,
    /// `F_i` on the space at `beta`, landing at `beta + alpha_i`.
    f: BTreeMap<(usize, Vec<i64>), M>,
    rank: usize,
}

fn shifted(beta: &[i64], i: usize, by: i64) -> Vec<i64> {
    let mut b = beta.to_vec();
    b[i] += by;
    b
}

fn level(beta: &[i64]) -> usize {
    beta.iter().sum::<i64>() as usize
}

impl IntegrableModule {
    pub fn spaces(&self) -> impl Iterator<Item = &WeightSpace> {
        self.spaces.values()
    }

    pub fn space(&self, beta: &[i64]) -> Option<&WeightSpace> {
        self.spaces.get(beta)
    }

    pub fn dim_at(&self, beta: &[i64]) -> usize {
        self.spaces.get(beta).map_or(0, WeightSpace::dim)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Whether the weight space at `beta` is known (constructed, or certainly zero).
    fn known(&self, beta: &[i64]) -> bool {
        beta.iter().all(|&b| b >= 0) && (self.complete || level(beta) <= self.depth)
    }

    /// Matrix of `E_i` (`raise = true`) or `F_i` on the space at `beta`, or
    /// `None` when the target lies beyond the constructed depth.
    pub fn op(&self, raise: bool, i: usize, beta: &[i64]) -> Option<M> {
        let target = shifted(beta, i, if raise { -1 } else { 1 });
        if !self.known(&target) || !self.known(beta) {
            return None;
        }
        let map = if raise { &self.e } else { &self.f };
        Some(
            map.get(&(i, beta.to_vec()))
                .cloned()
                .unwrap_or_else(|| M::zeros(self.dim_at(&target), self.dim_at(beta))),
        )
    }

    /// `K_{alpha_j}` on the space at `beta`: the scalar `q^{alpha_j^vee(mu)}`.
    fn k_scalar(&self, d: &RootDatum, j: usize, beta: &[i64]) -> i64 {
        let mu = self.lambda.sub(&d.root_to_weight(beta));
        mu.0[j]
    }

    fn weight_of(&self, d: &RootDatum, beta: &[i64]) -> Weight {
        self.lambda.sub(&d.root_to_weight(beta))
    }

    /// `sum_w F_w v_+` over all words `w` of content `beta`, in the basis at `beta`.
    /// `None` if the module was not built that deep.
    pub fn word_sum(&self, beta: &[i64]) -> Option<Vec<RatFunc>> {
        if beta.iter().any(|&b| b < 0) {
            return Some(Vec::new());
        }
        if beta.iter().all(|&b| b == 0) {
            return Some(vec![RatFunc::one()]);
        }
        if level(beta) > self.depth {
            return None;
        }
        let mut acc = vec![RatFunc::zero(); self.dim_at(beta)];
        for i in (0..self.rank).filter(|&i| beta[i] > 0) {
            let prev = shifted(beta, i, -1);
            let x = self.word_sum(&prev)?;
            if x.is_empty() || self.dim_at(&prev) == 0 || acc.is_empty() {
                continue;
            }
            for (a, y) in acc.iter_mut().zip(self.op(false, i, &prev)?.mul_vec(&x)) {
                *a = a.clone() + y;
            }
        }
        Some(acc)
    }

    /// Product of operators applied right to left starting at `beta`.
    fn word(&self, ops: &[(bool, usize)], beta: &[i64]) -> Option<M> {
        let mut cur = beta.to_vec();
        let mut acc = M::identity(self.dim_at(beta));
        for &(raise, i) in ops.iter().rev() {
            let m = self.op(raise, i, &cur)?;
            acc = m.mul(&acc);
            cur = shifted(&cur, i, if raise { -1 } else { 1 });
        }
        Some(acc)
    }
}

/// Builds `V(lambda)` down to `depth` levels below the highest weight.
pub fn build_module(d: &RootDatum, lambda: &Weight, depth: usize) -> Result<IntegrableModule, UqError> {
    d.check_dominant(lambda)?;
    let n = d.rank();
    let top = vec![0i64; n];
    let mut m = IntegrableModule {
        lambda: lambda.clone(),
        depth,
        complete: false,
        spaces: BTreeMap::new(),
        e: BTreeMap::new(),
        f: BTreeMap::new(),
        rank: n,
    };
    m.spaces.insert(
        top.clone(),
        WeightSpace { beta: top.clone(), weight: lambda.clone(), basis_words: vec![vec![]], gram: M::identity(1) },
    );
    let mut frontier = vec![top];
    for _ in 1..=depth {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &frontier {
            for i in 0..n {
                let b = shifted(beta, i, 1);
                if !next.contains(&b) {
                    next.push(b);
                }
            }
        }
        next.sort();
        let mut built = Vec::new();
        for beta in next {
            if add_level(d, &mut m, &beta) {
                built.push(beta);
            }
        }
        if built.is_empty() {
            m.complete = true;
            break;
        }
        frontier = built;
    }
    Ok(m)
}

/// Constructs the space at `beta` and the maps into and out of it; returns whether it is nonzero.
fn add_level(d: &RootDatum, m: &mut IntegrableModule, beta: &[i64]) -> bool {
    let n = d.rank();
    // Candidates F_i b with b a basis vector at beta - alpha_i.
    let mut cands: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let src = shifted(beta, i, -1);
        for b in 0..m.dim_at(&src) {
            cands.push((i, b));
        }
    }
    if cands.is_empty() {
        return false;
    }
    // Rows of the E-image: blocks for each j, sized by dim(beta - alpha_j).
    let offsets: Vec<usize> = (0..=n)
        .scan(0, |acc, j| {
            let o = *acc;
            if j < n {
                *acc += m.dim_at(&shifted(beta, j, -1));
            }
            Some(o)
        })
        .collect();
    let total = offsets[n];
    let mut phi = M::zeros(total, cands.len());
    for (c, &(i, b)) in cands.iter().enumerate() {
        let src = shifted(beta, i, -1);
        let src_wt = m.weight_of(d, &src);
        for j in 0..n {
            let tgt = shifted(beta, j, -1);
            if m.dim_at(&tgt) == 0 {
                continue;
            }
            // E_j F_i b = F_i E_j b + delta_ij [alpha_i^vee(wt b)] b
            let mut col = vec![RatFunc::zero(); m.dim_at(&tgt)];
            let mid = shifted(&src, j, -1);
            if m.dim_at(&mid) > 0 {
                let ej = &m.e[&(j, src.clone())];
                let fi = &m.f[&(i, mid.clone())];
                let ejb: Vec<RatFunc> = (0..ej.rows()).map(|r| ej.get(r, b).clone()).collect();
                col = fi.mul_vec(&ejb);
            }
            if i == j {
                col[b] = col[b].clone() + qint(src_wt.0[i]);
            }
            for (r, x) in col.into_iter().enumerate() {
                phi.set(offsets[j] + r, c, x);
            }
        }
    }
    let basis = phi.independent_columns();
    if basis.is_empty() {
        return false;
    }
    let phi_b = phi.select(&(0..total).collect::<Vec<_>>(), &basis);
    // A square invertible minor of phi_b to express candidates in the basis.
    let rows = phi_b.transpose().independent_columns();
    let sq = phi_b.select(&rows, &(0..basis.len()).collect::<Vec<_>>());
    let coords = |c: usize| -> Vec<RatFunc> {
        let rhs: Vec<RatFunc> = rows.iter().map(|&r| phi.get(r, c).clone()).collect();
        sq.solve(&rhs).expect("invertible minor")
    };
    let dim = basis.len();
    for i in 0..n {
        let src = shifted(beta, i, -1);
        let sdim = m.dim_at(&src);
        if sdim == 0 {
            continue;
        }
        let mut fm = M::zeros(dim, sdim);
        for (c, &(ci, b)) in cands.iter().enumerate() {
            if ci == i {
                for (r, x) in coords(c).into_iter().enumerate() {
                    fm.set(r, b, x);
                }
            }
        }
        m.f.insert((i, src), fm);
    }
    for j in 0..n {
        let tgt = shifted(beta, j, -1);
        let tdim = m.dim_at(&tgt);
        if tdim == 0 {
            continue;
        }
        let mut em = M::zeros(tdim, dim);
        for (k, &c) in basis.iter().enumerate() {
            for r in 0..tdim {
                em.set(r, k, phi.get(offsets[j] + r, c).clone());
            }
        }
        m.e.insert((j, beta.to_vec()), em);
    }
    // <F_i b, x> = <b, E_i x>
    let mut gram = M::zeros(dim, dim);
    for (k, &c) in basis.iter().enumerate() {
        let (i, b) = cands[c];
        let src = shifted(beta, i, -1);
        let g = &m.spaces[&src].gram;
        for (l, &c2) in basis.iter().enumerate() {
            let mut s = RatFunc::zero();
            for r in 0..m.dim_at(&src) {
                s = s + g.get(b, r).clone() * phi.get(offsets[i] + r, c2).clone();
            }
            gram.set(k, l, s);
        }
    }
    let basis_words = basis
        .iter()
        .map(|&c| {
            let (i, b) = cands[c];
            let mut w = vec![i];
            w.extend(m.spaces[&shifted(beta, i, -1)].basis_words[b].iter().copied());
            w
        })
        .collect();
    let weight = m.weight_of(d, beta);
    m.spaces.insert(beta.to_vec(), WeightSpace { beta: beta.to_vec(), weight, basis_words, gram });
    true
}

/// One checked instance of a defining relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UqCheck {
    pub family: &'static str,
    pub instance: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct UqReport {
    pub checks: Vec<UqCheck>,
    /// Set when the module was cut off at its depth, so checks reaching below it were skipped.
    pub truncated: bool,
}

impl UqReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&UqCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn passed_family(&self, family: &str) -> bool {
        self.checks.iter().filter(|c| c.family == family).all(|c| c.passed)
    }

    pub fn count(&self, family: &str) -> usize {
        self.checks.iter().filter(|c| c.family == family).count()
    }
}

impl fmt::Display for UqReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fam in FAMILIES {
            let n = self.count(fam);
            let ok = self.passed_family(fam);
            writeln!(f, "{fam}: {} ({n} instances)", if ok { "pass" } else { "FAIL" })?;
        }
        if let Some(c) = self.first_failure() {
            writeln!(f, "first failure: {} at {}", c.family, c.instance)?;
        }
        if self.truncated {
            writeln!(f, "module truncated at its depth")?;
        }
        Ok(())
    }
}

pub const FAMILIES: [&str; 6] = ["(i)", "(ii)", "(iii)", "(iv)", "(v)", "q=1"];

fn diag(n: usize, x: RatFunc) -> M {
    M::identity(n).scale(&x)
}

/// Checks relations (i)-(v) of `U_q(g)` on every constructed weight space,
/// plus the classical commutator after `q -> 1`.
pub fn verify_uq_relations(d: &RootDatum, m: &IntegrableModule) -> UqReport {
    let n = d.rank();
    let mut rep = UqReport { checks: Vec::new(), truncated: !m.complete };
    let mut push = |family: &'static str, instance: String, passed: bool| {
        rep.checks.push(UqCheck { family, instance, passed });
    };
    for sp in m.spaces() {
        let beta = &sp.beta;
        let dim = sp.dim();
        let at = format!("weight {}", sp.weight);
        // (i) K_0 = 1 and K_{a_i} K_{a_j} = K_{a_i + a_j}, with K_gamma acting by q^{(gamma, mu)}.
        let k_of = |gamma: &[i64]| diag(dim, qpow(gamma.iter().zip(&sp.weight.0).map(|(g, w)| g * w).sum()));
        push("(i)", format!("K_0 at {at}"), k_of(&vec![0; n]) == M::identity(dim));
        for i in 0..n {
            for j in i..n {
                let (ei, ej) = (shifted(&vec![0; n], i, 1), shifted(&vec![0; n], j, 1));
                let sum = shifted(&ei, j, 1);
                let ok = k_of(&ei).mul(&k_of(&ej)) == k_of(&sum);
                push("(i)", format!("K_{}K_{} at {at}", d.label(i), d.label(j)), ok);
            }
        }
        for i in 0..n {
            for (raise, fam) in [(true, "(ii)"), (false, "(iii)")] {
                let Some(x) = m.op(raise, i, beta) else { continue };
                let tgt = shifted(beta, i, if raise { -1 } else { 1 });
                for j in 0..n {
                    // K_{a_j} X K_{-a_j} = q^{+-c_ji} X
                    let kt = qpow(m.k_scalar(d, j, &tgt));
                    let ks = qpow(-m.k_scalar(d, j, beta));
                    let lhs = x.scale(&(kt * ks));
                    let c = d.cartan(j, i);
                    let rhs = x.scale(&qpow(if raise { c } else { -c }));
                    let g = if raise { "E" } else { "F" };
                    push(fam, format!("K_{} {g}_{} at {at}", d.label(j), d.label(i)), lhs == rhs);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (Some(ef), Some(fe)) = (m.word(&[(true, i), (false, j)], beta), m.word(&[(false, j), (true, i)], beta))
                else {
                    continue;
                };
                let comm = ef.sub(&fe);
                let expect = if i == j { diag(dim, qint(sp.weight.0[i])) } else { M::zeros(comm.rows(), comm.cols()) };
                push("(iv)", format!("[E_{}, F_{}] at {at}", d.label(i), d.label(j)), comm == expect);
                if i == j {
                    let classical = comm.entries().all(|(r, c, x)| {
                        let want = if r == c { crate::algebra::rat(sp.weight.0[i]) } else { crate::algebra::rat(0) };
                        x.at_one() == Some(want)
                    });
                    push("q=1", format!("[E_{i}, F_{i}] at {at}", i = d.label(i)), classical);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let top = (1 - d.cartan(i, j)) as usize;
                for raise in [true, false] {
                    let mut acc: Option<M> = None;
                    let mut ok = true;
                    for r in 0..=top {
                        let mut ops = vec![(raise, i); r];
                        ops.push((raise, j));
                        ops.extend(std::iter::repeat_n((raise, i), top - r));
                        let Some(w) = m.word(&ops, beta) else {
                            ok = false;
                            break;
                        };
                        let denom = RatFunc::from_laurent(quantum_factorial(r as i64))
                            * RatFunc::from_laurent(quantum_factorial((top - r) as i64));
                        let mut coef = denom.inv();
                        if r % 2 == 1 {
                            coef = -coef;
                        }
                        let term = w.scale(&coef);
                        acc = Some(match acc {
                            None => term,
                            Some(a) => a.add(&term),
                        });
                    }
                    if !ok {
                        continue;
                    }
                    let g = if raise { "E" } else { "F" };
                    let zero = acc.is_none_or(|a| a.is_zero());
                    push("(v)", format!("Serre {g}_{} {g}_{} at {at}", d.label(i), d.label(j)), zero);
                }
            }
        }
    }
    rep
}
