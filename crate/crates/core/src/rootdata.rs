//! Cartan data of a loop-free oriented graph and the scalars built from it.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{rat, LaurentPoly, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("loop edge at vertex {0}: the graph must have no loops")]
    Loop(String),
    #[error("edge references undeclared vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("weight is not dominant: coroot value {value} at vertex {vertex}")]
    NotDominant { vertex: String, value: i64 },
    #[error("Q_ii is not a polynomial datum (vertex {0})")]
    DiagonalQ(String),
    #[error("vector has {got} entries, expected {expected}")]
    Arity { got: usize, expected: usize },
}

/// Symmetric Cartan datum with orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    epsilon: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    d: Vec<i64>,
    // Kept as data (not recomputed) so a negative control can corrupt it.
    t: Vec<Vec<i64>>,
}

impl RootDatum {
    /// Builds the datum from vertex labels and oriented edges given by label.
    pub fn build<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self, RootDataError> {
        let labels: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(RootDataError::DuplicateVertex(l.clone()));
            }
        }
        let find = |s: &str| {
            labels.iter().position(|l| l == s).ok_or_else(|| RootDataError::UnknownVertex(s.to_string()))
        };
        let mut idx = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (find(a.as_ref())?, find(b.as_ref())?);
            if a == b {
                return Err(RootDataError::Loop(labels[a].clone()));
            }
            idx.push((a, b));
        }
        Ok(Self::from_indices(labels, idx))
    }

    fn from_indices(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Self {
        let n = labels.len();
        let mut epsilon = vec![vec![0i64; n]; n];
        for &(a, b) in &edges {
            epsilon[a][b] += 1;
        }
        let mut cartan = vec![vec![0i64; n]; n];
        let mut t = vec![vec![1i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    cartan[i][j] = 2;
                } else {
                    cartan[i][j] = -(epsilon[i][j] + epsilon[j][i]);
                    t[i][j] = if epsilon[i][j] % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        Self { labels, edges, epsilon, cartan, d: vec![1; n], t }
    }

    /// Type A_n with edges k -> k+1, labels "1".."n".
    pub fn type_a(n: usize) -> Self {
        let labels = (1..=n).map(|k| k.to_string()).collect();
        let edges = (1..n).map(|k| (k - 1, k)).collect();
        Self::from_indices(labels, edges)
    }

    /// Affine A_1 with both edges oriented 1 -> 2.
    pub fn affine_a1() -> Self {
        Self::from_indices(vec!["1".into(), "2".into()], vec![(0, 1), (0, 1)])
    }

    /// Copy with `t_ij` negated; used as a negative control.
    pub fn with_corrupted_t(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.t[i][j] = -out.t[i][j];
        out
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn epsilon(&self, i: usize, j: usize) -> i64 {
        self.epsilon[i][j]
    }

    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn d(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn t_scalar(&self, i: usize, j: usize) -> i64 {
        self.t[i][j]
    }

    /// `Q_ij(u,v) = t_ij (u - v)^(eps_ij + eps_ji)`.
    pub fn q_polynomial(&self, i: usize, j: usize) -> Result<BivariatePoly, RootDataError> {
        if i == j {
            return Err(RootDataError::DiagonalQ(self.labels[i].clone()));
        }
        let m = (self.epsilon[i][j] + self.epsilon[j][i]) as u32;
        Ok(BivariatePoly::u_minus_v_pow(m).scale(&rat(self.t[i][j])))
    }

    /// `(alpha_i | alpha_j)`, the symmetric form on the root lattice.
    pub fn root_form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank() {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank() {
                s += a[i] * b[j] * self.cartan[i][j];
            }
        }
        s
    }

    pub fn zero_weight(&self) -> Weight {
        Weight(vec![0; self.rank()])
    }

    /// The simple root `alpha_i` as a weight (its coroot values are Cartan column `i`).
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight((0..self.rank()).map(|k| self.cartan[i][k]).collect())
    }

    /// The weight of a root-lattice element `sum nu_j alpha_j`.
    pub fn root_to_weight(&self, nu: &[i64]) -> Weight {
        let mut w = self.zero_weight();
        for (j, &c) in nu.iter().enumerate() {
            if c != 0 {
                for k in 0..self.rank() {
                    w.0[k] += c * self.cartan[j][k];
                }
            }
        }
        w
    }

    pub fn fundamental(&self, i: usize) -> Weight {
        let mut w = self.zero_weight();
        w.0[i] = 1;
        w
    }

    /// `alpha_i^vee(mu)`.
    pub fn cartan_pairing(&self, mu: &Weight, i: usize) -> i64 {
        mu.0[i]
    }

    pub fn check_weight(&self, w: &Weight) -> Result<(), RootDataError> {
        if w.0.len() != self.rank() {
            return Err(RootDataError::Arity { got: w.0.len(), expected: self.rank() });
        }
        Ok(())
    }

    pub fn check_dominant(&self, w: &Weight) -> Result<(), RootDataError> {
        self.check_weight(w)?;
        match w.0.iter().position(|&c| c < 0) {
            Some(i) => Err(RootDataError::NotDominant { vertex: self.labels[i].clone(), value: w.0[i] }),
            None => Ok(()),
        }
    }

    /// `lambda - sum v_i alpha_i`, for dominant `lambda`.
    pub fn mu_from_dimvec(&self, lambda: &Weight, v: &[i64]) -> Result<Weight, RootDataError> {
        self.check_dominant(lambda)?;
        if v.len() != self.rank() {
            return Err(RootDataError::Arity { got: v.len(), expected: self.rank() });
        }
        Ok(lambda.sub(&self.root_to_weight(v)))
    }

    /// The framing `w_i = alpha_i^vee(lambda)`.
    pub fn framing(&self, lambda: &Weight) -> Vec<i64> {
        lambda.0.clone()
    }

    /// Lists `word` by labels, space-separated.
    pub fn word_string(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// A weight recorded by its coroot values `alpha_i^vee(mu)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `[n] = q^(n-1) + q^(n-3) + ... + q^(1-n)`, with `[-n] = -[n]`.
pub fn quantum_integer(n: i64) -> LaurentPoly {
    let m = n.abs();
    let sign = if n < 0 { -1 } else { 1 };
    LaurentPoly::from_terms((0..m).map(|k| (m - 1 - 2 * k, rat(sign))))
}

/// `[n]! = [1][2]...[n]` for `n >= 0`.
pub fn quantum_factorial(n: i64) -> LaurentPoly {
    (1..=n).fold(LaurentPoly::one(), |acc, k| &acc * &quantum_integer(k))
}

/// The balanced Gaussian binomial `[n choose k]`, zero outside `0 <= k <= n`.
pub fn quantum_binomial(n: i64, k: i64) -> LaurentPoly {
    if k < 0 || n < 0 || k > n {
        return LaurentPoly::zero();
    }
    // Row by row: [m choose j] = q^j [m-1 choose j] + q^{j-m} [m-1 choose j-1].
    let mut row = vec![LaurentPoly::one()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m as usize + 1);
        for j in 0..=m {
            let mut x = LaurentPoly::zero();
            if j >= 1 {
                x = &x + &row[j as usize - 1].shift(j - m);
            }
            if j < m {
                x = &x + &row[j as usize].shift(j);
            }
            next.push(x);
        }
        row = next;
    }
    row.swap_remove(k as usize)
}

/// Polynomial in two commuting variables `u, v`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn add_term(&mut self, du: u32, dv: u32, c: Rational) {
        let e = self.terms.entry((du, dv)).or_insert_with(|| rat(0));
        *e += c;
        if *e == rat(0) {
            self.terms.remove(&(du, dv));
        }
    }

    /// `(u - v)^m` by the binomial theorem.
    pub fn u_minus_v_pow(m: u32) -> Self {
        let mut p = Self::zero();
        let mut binom = rat(1);
        for k in 0..=m {
            let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
            p.add_term(m - k, k, &binom * sign);
            binom = binom * rat((m - k) as i64) / rat((k + 1) as i64);
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero();
        for (&(a, b), x) in &self.terms {
            p.add_term(a, b, x * c);
        }
        p
    }

    /// `p(v, u)`.
    pub fn swap(&self) -> Self {
        let mut p = Self::zero();
        for (&(a, b), x) in &self.terms {
            p.add_term(b, a, x.clone());
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        let mut s = rat(0);
        for (&(a, b), x) in &self.terms {
            s += x * num_traits::pow(u.clone(), a as usize) * num_traits::pow(v.clone(), b as usize);
        }
        s
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in self.terms.iter().rev() {
            let neg = c < &rat(0);
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            if mag != rat(1) || (a == 0 && b == 0) {
                factors.push(crate::algebra::format_rational(&mag));
            }
            for (var, e) in [("u", a), ("v", b)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn graph() -> impl Strategy<Value = RootDatum> {
        (1usize..5).prop_flat_map(|n| {
            let pairs = proptest::collection::vec((0..n, 0..n), 0..6);
            pairs.prop_map(move |es| {
                let edges = es.into_iter().filter(|(a, b)| a != b).collect();
                RootDatum::from_indices((1..=n).map(|k| k.to_string()).collect(), edges)
            })
        })
    }

    proptest! {
        #[test]
        fn cartan_symmetric_and_q_swap(d in graph()) {
            for i in 0..d.rank() {
                for j in 0..d.rank() {
                    prop_assert_eq!(d.cartan(i, j), d.cartan(j, i));
                    if i != j {
                        let qij = d.q_polynomial(i, j).unwrap();
                        let qji = d.q_polynomial(j, i).unwrap();
                        prop_assert_eq!(qij, qji.swap());
                        let sign = if (-d.cartan(i, j)) % 2 == 0 { 1 } else { -1 };
                        prop_assert_eq!(d.t_scalar(i, j) * d.t_scalar(j, i), sign);
                    }
                }
            }
        }

        #[test]
        fn quantum_integer_bar_invariant(n in -12i64..12) {
            prop_assert_eq!(quantum_integer(n).bar(), quantum_integer(n));
        }

        #[test]
        fn dimvec_round_trip(d in graph(), seed in proptest::collection::vec(0i64..4, 8)) {
            let lambda = Weight(seed[..d.rank()].to_vec());
            let v: Vec<i64> = seed[4..4 + d.rank()].to_vec();
            let mu = d.mu_from_dimvec(&lambda, &v).unwrap();
            prop_assert_eq!(mu.add(&d.root_to_weight(&v)), lambda);
        }
    }
}
