//! The decategorified layer: integrable modules `V(lambda)` over `Q(q)`,
//! weight multiplicities, and the combinatorics of Nakajima quiver varieties.

mod module;
mod multiplicity;

use thiserror::Error;

use num_traits::Zero;

use crate::algebra::{is_integer, rat, ratio, RatFunc, Rational};
use crate::rootdata::{RootDataError, RootDatum, Weight};

pub use module::{build_module, verify_uq_relations, IntegrableModule, UqCheck, UqReport, WeightSpace, FAMILIES};
pub use multiplicity::{depth_of, freudenthal_multiplicity, RootMultiplicities, WeightMultiplicities};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UqError {
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("the Cartan matrix is singular, so a weight does not determine its depth")]
    DegenerateCartan,
    #[error("dimension vector has {got} entries, expected {expected}")]
    Arity { got: usize, expected: usize },
    #[error("dimension vector entry {0} is negative")]
    NegativeDimension(i64),
}

fn check_dimvec(d: &RootDatum, v: &[i64]) -> Result<(), UqError> {
    if v.len() != d.rank() {
        return Err(UqError::Arity { got: v.len(), expected: d.rank() });
    }
    match v.iter().find(|&&x| x < 0) {
        Some(&x) => Err(UqError::NegativeDimension(x)),
        None => Ok(()),
    }
}

/// Dimension of the cyclotomic quotient `R^lambda_nu`, computed without the KLR
/// algebra: `e(j) R^lambda e(i)` has graded dimension given by the Shapovalov
/// pairing of `F_i v_+` and `F_j v_+`, so at `q = 1` the total is `<s, s>` for
/// `s` the sum of `F_w v_+` over all words of content `nu`.
pub fn cyclotomic_dimension_oracle(d: &RootDatum, lambda: &Weight, nu: &[i64]) -> Result<Rational, UqError> {
    check_dimvec(d, nu)?;
    let depth = nu.iter().sum::<i64>() as usize;
    let m = build_module(d, lambda, depth)?;
    let Some(sp) = m.space(nu) else { return Ok(rat(0)) };
    let s = m.word_sum(nu).expect("module built to the depth of nu");
    let gs = sp.gram.mul_vec(&s);
    let total = s.iter().zip(gs).fold(RatFunc::zero(), |acc, (a, b)| acc + a.clone() * b);
    Ok(total.at_one().expect("Shapovalov pairings of integral vectors are Laurent"))
}

/// Whether the quiver variety for `(lambda, v)` is nonempty, i.e. `lambda - v`
/// is a weight of `V(lambda)`.
pub fn nakajima_nonempty(d: &RootDatum, lambda: &Weight, v: &[i64]) -> Result<bool, UqError> {
    check_dimvec(d, v)?;
    Ok(WeightMultiplicities::new(d, lambda)?.at_depth(v) > 0)
}

/// The nonempty members of the `i`-string through depth `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringCheck {
    /// Values of `k` for which depth `v - k alpha_i` (weight `mu + k alpha_i`) is nonempty.
    pub nonempty: Vec<i64>,
    /// The window `[lo, hi]` outside of which emptiness is guaranteed.
    pub lo: i64,
    pub hi: i64,
    /// Nonempty set lies inside the window and is symmetric under `s_i`.
    pub finite: bool,
}

/// Checks that only finitely many `k` give a nonempty variety at `mu + k alpha_i`.
///
/// Upward the string stops once the depth goes negative (`k > v_i`). The
/// reflection `s_i` maps `k` to `-k - alpha_i^vee(mu)`, which bounds it below.
/// The sweep runs `margin` steps past both ends and confirms nothing is found there.
pub fn string_finiteness(d: &RootDatum, lambda: &Weight, v: &[i64], i: usize, margin: i64) -> Result<StringCheck, UqError> {
    check_dimvec(d, v)?;
    let mut wm = WeightMultiplicities::new(d, lambda)?;
    let mu = lambda.sub(&d.root_to_weight(v));
    let hi = v[i];
    let lo = -hi - mu.0[i];
    let mut nonempty = Vec::new();
    for k in (lo.min(hi) - margin)..=(hi.max(lo) + margin) {
        let mut b = v.to_vec();
        b[i] -= k;
        if wm.at_depth(&b) > 0 {
            nonempty.push(k);
        }
    }
    let inside = nonempty.iter().all(|&k| lo <= k && k <= hi);
    let symmetric = nonempty.iter().all(|&k| nonempty.contains(&(-k - mu.0[i])));
    Ok(StringCheck { nonempty, lo, hi, finite: inside && symmetric })
}

/// Dimensions attached to the framed quiver with framing `w = lambda` and dimension vector `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverDims {
    pub dim_e: i64,
    pub dim_g: i64,
    /// `2 (dim E - dim G)`, the expected dimension of the quiver variety.
    pub expected_dim: i64,
}

pub fn quiver_space_dims(d: &RootDatum, lambda: &Weight, v: &[i64]) -> Result<QuiverDims, UqError> {
    d.check_dominant(lambda)?;
    check_dimvec(d, v)?;
    let w = d.framing(lambda);
    let edges: i64 = d.edges().iter().map(|&(a, b)| v[a] * v[b]).sum();
    let framing: i64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    let dim_e = edges + framing;
    let dim_g = v.iter().map(|x| x * x).sum();
    Ok(QuiverDims { dim_e, dim_g, expected_dim: 2 * (dim_e - dim_g) })
}

/// Coefficients of `c_1(L_i) h` in the period class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodClass {
    pub coeffs: Vec<Rational>,
    pub integral: bool,
    /// Reversing every edge changes the class only by an integral one.
    pub orientation_independent: bool,
}

fn period_coeffs(rank: usize, edges: &[(usize, usize)], w: &[i64], v: &[i64]) -> Vec<Rational> {
    (0..rank)
        .map(|i| {
            let incoming: i64 = edges.iter().filter(|e| e.1 == i).map(|e| v[e.0]).sum();
            let outgoing: i64 = edges.iter().filter(|e| e.0 == i).map(|e| v[e.1]).sum();
            ratio(w[i] + incoming - outgoing, 2)
        })
        .collect()
}

/// `1/2 (w_i + sum_{j -> i} v_j - sum_{i -> j} v_j)` for every vertex `i`.
pub fn period_class(d: &RootDatum, lambda: &Weight, v: &[i64]) -> Result<PeriodClass, UqError> {
    d.check_dominant(lambda)?;
    check_dimvec(d, v)?;
    let w = d.framing(lambda);
    let coeffs = period_coeffs(d.rank(), d.edges(), &w, v);
    let reversed: Vec<(usize, usize)> = d.edges().iter().map(|&(a, b)| (b, a)).collect();
    let other = period_coeffs(d.rank(), &reversed, &w, v);
    let orientation_independent = coeffs.iter().zip(&other).all(|(a, b)| is_integer(&(a - b)));
    let integral = coeffs.iter().all(is_integer);
    Ok(PeriodClass { coeffs, integral, orientation_independent })
}

/// Whether the twists `a` on `X_mu` and `b` on `X_{mu - alpha_i}` admit a
/// connecting line bundle: `a_i, b_i` and every `a_j - b_j` integral.
pub fn twist_integrality(a: &[Rational], b: &[Rational], i: usize) -> bool {
    assert_eq!(a.len(), b.len());
    is_integer(&a[i]) && is_integer(&b[i]) && a.iter().zip(b).all(|(x, y)| is_integer(&(x - y)))
}

/// Coordinates of `p_1^* chi_1 - p_2^* chi_2` in the integral basis
/// `{p_1^* c_1(L_j)}_j` followed by `p_2^* c_1(L'_i)`, computed by applying
/// the two pullback matrices.
pub fn twist_class_coordinates(a: &[Rational], b: &[Rational], i: usize) -> Vec<Rational> {
    let n = a.len();
    // p_1^* c_1(L_j) is basis vector j; p_2^* c_1(L'_j) equals it for j != i
    // and is the extra basis vector n for j = i.
    let p1 = |j: usize| j;
    let p2 = |j: usize| if j == i { n } else { j };
    let mut out = vec![rat(0); n + 1];
    for j in 0..n {
        out[p1(j)] += &a[j];
        out[p2(j)] -= &b[j];
    }
    out
}

#[cfg(test)]
mod tests;
