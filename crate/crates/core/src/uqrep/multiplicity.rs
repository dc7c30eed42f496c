//! Weight multiplicities of `V(lambda)` by the Freudenthal recursion.
//!
//! Everything is written in root-lattice coordinates: the weight `mu` is
//! `lambda - beta` with `beta = sum b_i alpha_i`, so only the Cartan matrix and
//! coroot values of `lambda` are needed. Root multiplicities come from the
//! Peterson recursion, which also covers affine and indefinite types.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::algebra::{rat, Matrix, Rational};
use crate::rootdata::{RootDataError, RootDatum, Weight};

use super::UqError;

/// Multiplicities of positive roots, memoized.
#[derive(Debug)]
pub struct RootMultiplicities<'a> {
    d: &'a RootDatum,
    mult: HashMap<Vec<i64>, i64>,
}

impl<'a> RootMultiplicities<'a> {
    pub fn new(d: &'a RootDatum) -> Self {
        Self { d, mult: HashMap::new() }
    }

    /// `sum_k mult(beta/k)/k` over integers `k >= 1` dividing `beta`.
    fn c(&mut self, beta: &[i64]) -> Rational {
        let mut s = Rational::zero();
        let g = beta.iter().fold(0, |g, &b| num_integer::gcd(g, b));
        for k in 1..=g {
            if g % k == 0 {
                let part: Vec<i64> = beta.iter().map(|b| b / k).collect();
                s += rat(self.mult(&part)) / rat(k);
            }
        }
        s
    }

    /// Multiplicity of the positive root-lattice element `beta` as a root (0 if not a root).
    pub fn mult(&mut self, beta: &[i64]) -> i64 {
        if let Some(&m) = self.mult.get(beta) {
            return m;
        }
        let ht: i64 = beta.iter().sum();
        let m = if beta.iter().any(|&b| b < 0) || ht == 0 {
            0
        } else if ht == 1 {
            1
        } else {
            let coef = self.d.root_form(beta, beta) - 2 * ht;
            if coef == 0 {
                // Real roots of height > 1 and imaginary roots both have coef != 0.
                0
            } else {
                let mut rhs = Rational::zero();
                for b1 in below(beta) {
                    let b2: Vec<i64> = beta.iter().zip(&b1).map(|(x, y)| x - y).collect();
                    let f = self.d.root_form(&b1, &b2);
                    if f != 0 {
                        let c1 = self.c(&b1);
                        let c2 = self.c(&b2);
                        rhs += rat(f) * c1 * c2;
                    }
                }
                let c_beta = rhs / rat(coef);
                let g = beta.iter().fold(0, |g, &b| num_integer::gcd(g, b));
                let mut rest = Rational::zero();
                for k in 2..=g {
                    if g % k == 0 {
                        let part: Vec<i64> = beta.iter().map(|b| b / k).collect();
                        rest += rat(self.mult(&part)) / rat(k);
                    }
                }
                let m = c_beta - rest;
                assert!(m.is_integer() && !m.is_negative(), "root multiplicity {m} for {beta:?}");
                m.to_integer().try_into().expect("root multiplicity fits in i64")
            }
        };
        self.mult.insert(beta.to_vec(), m);
        m
    }
}

/// Nonzero `gamma` with `0 <= gamma <= beta` componentwise and `gamma != beta`.
fn below(beta: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in beta {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..=b).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.retain(|g| g.iter().any(|&x| x != 0) && g.as_slice() != beta);
    out
}

/// Weight multiplicities of `V(lambda)` indexed by depth `beta`, memoized.
#[derive(Debug)]
pub struct WeightMultiplicities<'a> {
    d: &'a RootDatum,
    lambda: Weight,
    roots: RootMultiplicities<'a>,
    memo: HashMap<Vec<i64>, i64>,
}

impl<'a> WeightMultiplicities<'a> {
    pub fn new(d: &'a RootDatum, lambda: &Weight) -> Result<Self, RootDataError> {
        d.check_dominant(lambda)?;
        Ok(Self { d, lambda: lambda.clone(), roots: RootMultiplicities::new(d), memo: HashMap::new() })
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    /// Dimension of the weight space `lambda - beta`.
    pub fn at_depth(&mut self, beta: &[i64]) -> i64 {
        if beta.iter().any(|&b| b < 0) {
            return 0;
        }
        if beta.iter().all(|&b| b == 0) {
            return 1;
        }
        if let Some(&m) = self.memo.get(beta) {
            return m;
        }
        let d = self.d;
        let lam = self.lambda.0.clone();
        let lhs = 2 * beta.iter().zip(&lam).map(|(b, l)| b * (l + 1)).sum::<i64>() - d.root_form(beta, beta);
        let m = if lhs <= 0 {
            // |lambda+rho|^2 > |mu+rho|^2 for every weight mu < lambda.
            0
        } else {
            let mut rhs = 0i64;
            for gamma in below(beta).into_iter().chain(std::iter::once(beta.to_vec())) {
                let mg = self.roots.mult(&gamma);
                if mg == 0 {
                    continue;
                }
                let lam_gamma: i64 = gamma.iter().zip(&lam).map(|(g, l)| g * l).sum();
                let mut k = 1;
                loop {
                    let rest: Vec<i64> = beta.iter().zip(&gamma).map(|(b, g)| b - k * g).collect();
                    if rest.iter().any(|&x| x < 0) {
                        break;
                    }
                    let pair = lam_gamma - d.root_form(&rest, &gamma);
                    let mr = self.at_depth(&rest);
                    rhs += mg * pair * mr;
                    k += 1;
                }
            }
            let rhs = 2 * rhs;
            assert!(rhs % lhs == 0, "Freudenthal quotient {rhs}/{lhs} at {beta:?}");
            rhs / lhs
        };
        self.memo.insert(beta.to_vec(), m);
        m
    }

    /// Dimension of the weight space `mu`. Needs an invertible Cartan matrix to
    /// recover the depth from `mu`.
    pub fn at_weight(&mut self, mu: &Weight) -> Result<i64, UqError> {
        self.d.check_weight(mu)?;
        match depth_of(self.d, &self.lambda, mu)? {
            Some(beta) => Ok(self.at_depth(&beta)),
            None => Ok(0),
        }
    }
}

/// The root-lattice element `beta` with `mu = lambda - beta`, if it is a
/// nonnegative integral combination.
pub fn depth_of(d: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<Option<Vec<i64>>, UqError> {
    let n = d.rank();
    let rows: Vec<Vec<Rational>> = (0..n).map(|k| (0..n).map(|j| rat(d.cartan(j, k))).collect()).collect();
    let c = Matrix::from_rows(rows, n);
    let diff: Vec<Rational> = lambda.sub(mu).0.into_iter().map(rat).collect();
    let Some(beta) = c.solve(&diff) else {
        return Err(UqError::DegenerateCartan);
    };
    if beta.iter().all(|b| b.is_integer() && !b.is_negative()) {
        Ok(Some(beta.iter().map(|b| b.to_integer().try_into().unwrap()).collect()))
    } else {
        Ok(None)
    }
}

/// Multiplicity of `mu` in `V(lambda)`; convenience wrapper without a shared memo.
pub fn freudenthal_multiplicity(d: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<i64, UqError> {
    WeightMultiplicities::new(d, lambda)?.at_weight(mu)
}
