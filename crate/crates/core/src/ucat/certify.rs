//! The categorical-action certifier: five conditions checked on a candidate.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{DensePoly, Field, LaurentPoly, Matrix, RatFunc};
use crate::klr::cyclotomic::MatrixBackend;
use crate::klr::relations::{relation_instances, run_backend};
use crate::rootdata::{quantum_binomial, quantum_integer, RootDatum, Weight};
use crate::uqrep::IntegrableModule;

use super::action::{ActionError, CandidateAction, WeightEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotChecked,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotChecked => "not checked",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub number: u8,
    pub title: &'static str,
    pub items: Vec<CheckItem>,
}

impl ConditionReport {
    pub fn status(&self) -> Status {
        if self.items.iter().any(|i| i.status == Status::Fail) {
            Status::Fail
        } else if self.items.iter().any(|i| i.status == Status::Pass) {
            Status::Pass
        } else {
            Status::NotChecked
        }
    }

    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.status == Status::Fail)
    }
}

/// The commutator summand found by condition (3) at one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub vertex: usize,
    pub weight: String,
    pub pairing: i64,
    /// `[|pairing|]`, which appears on the side chosen by the sign of the pairing.
    pub value: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertReport {
    pub conditions: Vec<ConditionReport>,
    pub summands: Vec<Summand>,
}

impl CertReport {
    pub fn condition(&self, n: u8) -> &ConditionReport {
        &self.conditions[(n - 1) as usize]
    }

    pub fn passed(&self, n: u8) -> bool {
        self.condition(n).status() != Status::Fail
    }

    /// No condition failed.
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.status() != Status::Fail)
    }
}

impl fmt::Display for CertReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            writeln!(f, "({}) {}: {}", c.number, c.title, c.status())?;
            for it in &c.items {
                if it.status != Status::Pass {
                    write!(f, "    {} [{}]", it.name, it.status)?;
                    if let Some(w) = &it.witness {
                        write!(f, ": {w}")?;
                    }
                    writeln!(f)?;
                }
            }
        }
        Ok(())
    }
}

fn item(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> CheckItem {
    CheckItem {
        name: name.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        witness: if ok { None } else { Some(witness()) },
    }
}

fn not_checked(name: impl Into<String>, why: &str) -> CheckItem {
    CheckItem { name: name.into(), status: Status::NotChecked, witness: Some(why.to_string()) }
}

type LM = Matrix<LaurentPoly>;

/// Product `a * b`, treating a missing factor as a zero map of the right shape.
fn compose(a: Option<LM>, b: Option<LM>, rows: usize, cols: usize) -> LM {
    match (a, b) {
        (Some(a), Some(b)) => a.mul(&b),
        _ => LM::zeros(rows, cols),
    }
}

fn first_difference(a: &LM, b: &LM) -> String {
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if a.get(r, c) != b.get(r, c) {
                return format!("entry ({},{}) is {} but should be {}", r + 1, c + 1, a.get(r, c), b.get(r, c));
            }
        }
    }
    "matrices differ".into()
}

/// Runs all five conditions. Structural problems are rejected up front.
pub fn certify(d: &RootDatum, c: &CandidateAction) -> Result<CertReport, ActionError> {
    c.validate(d)?;
    let n = d.rank();
    let nw = c.weights.len();
    let name = |w: usize| c.weights[w].name.as_str();

    // (1) integrability along i-strings
    let mut c1 = Vec::new();
    for i in 0..n {
        let mut seen = BTreeSet::new();
        for w in 0..nw {
            if c.weights[w].dim == 0 || seen.contains(&w) {
                continue;
            }
            // Walk the whole string through w.
            let mut top = w;
            while let Some(t) = c.neighbor(d, true, i, top) {
                top = t;
            }
            let mut string = vec![top];
            while let Some(t) = c.neighbor(d, false, i, *string.last().unwrap()) {
                string.push(t);
            }
            seen.extend(string.iter().copied());
            // Dimensions must be symmetric under s_i, which also bounds the string.
            let mut bad = None;
            for &s in &string {
                let mu = &c.weights[s].weight;
                let refl = mu.sub(&d.simple_root(i).scale(mu.0[i]));
                let other = c.index_of_weight(&refl).map_or(0, |k| c.weights[k].dim);
                if other != c.weights[s].dim {
                    bad = Some(format!("dim at {} is {} but at its reflection {} is {}", name(s), c.weights[s].dim, refl, other));
                    break;
                }
            }
            let label = format!("{}-string through {}", d.label(i), name(top));
            c1.push(item(label, bad.is_none(), || bad.unwrap()));
        }
    }

    // (2) positivity of endomorphism algebras and of multiplicities
    let mut c2 = Vec::new();
    for w in &c.weights {
        match &w.end_dims {
            None => c2.push(not_checked(format!("End at {}", w.name), "no endomorphism data")),
            Some(ed) => {
                for (k, p) in ed.iter().enumerate() {
                    let ok = p.terms().all(|(e, c)| e >= 0 && c.is_integer() && !c.is_negative())
                        && p.coeff(0).is_one();
                    c2.push(item(format!("End of object {} at {}", k + 1, w.name), ok, || {
                        format!("graded dimension {p} is not 1 + (positive degrees)")
                    }));
                }
            }
        }
    }
    for (g, map) in [("E", &c.e), ("F", &c.f)] {
        for (&(i, w), m) in map {
            let bad = m.entries().find(|(_, _, x)| x.terms().any(|(_, c)| !c.is_integer() || c.is_negative()));
            c2.push(item(format!("[{g}_{}] out of {} has N[q,q^-1] entries", d.label(i), name(w)), bad.is_none(), || {
                let (r, k, x) = bad.unwrap();
                format!("entry ({},{}) is {x}", r + 1, k + 1)
            }));
        }
    }

    // (3) commutator decomposition
    let mut c3 = Vec::new();
    let mut summands = Vec::new();
    for i in 0..n {
        for w in 0..nw {
            let dim = c.weights[w].dim;
            if dim == 0 {
                continue;
            }
            let pairing = c.weights[w].weight.0[i];
            // E_i F_i and F_i E_i on the space at w
            let down = c.neighbor(d, false, i, w);
            let up = c.neighbor(d, true, i, w);
            let ef = compose(down.and_then(|t| c.op(d, true, i, t)), c.op(d, false, i, w), dim, dim);
            let fe = compose(up.and_then(|t| c.op(d, false, i, t)), c.op(d, true, i, w), dim, dim);
            let value = quantum_integer(pairing.abs());
            let id = LM::identity(dim).scale(&value);
            let (lhs, rhs, shape) = if pairing >= 0 {
                (ef.clone(), fe.add(&id), "E F = F E + [n] Id")
            } else {
                (fe.clone(), ef.add(&id), "F E = E F + [n] Id")
            };
            let ok = lhs == rhs;
            summands.push(Summand { vertex: i, weight: name(w).to_string(), pairing, value });
            c3.push(item(format!("{shape} for i={} at {} (n={})", d.label(i), name(w), pairing.abs()), ok, || {
                first_difference(&lhs, &rhs)
            }));
        }
    }

    // (4) KLR action on operator tables, bubbles, and data the tables do not carry
    let mut c4 = Vec::new();
    for (tname, t) in &c.tables {
        let pool: Vec<usize> = t.idems.keys().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let insts = relation_instances(d, t.strands, &pool);
        let rep = run_backend(d, &MatrixBackend { tables: t }, &insts);
        c4.push(item(format!("KLR relations on table {tname} ({} instances)", rep.checked), rep.passed(), || {
            let f = rep.first_failure.clone().unwrap();
            format!("{}: {}", f.relation, f.detail)
        }));
        let sum = t.idems.values().fold(Matrix::zeros(t.dim, t.dim), |acc, m| acc.add(m));
        c4.push(item(format!("idempotents of table {tname} sum to 1"), sum == Matrix::identity(t.dim), || {
            "sum of e(i) is not the identity".into()
        }));
    }
    if c.tables.is_empty() {
        c4.push(not_checked("KLR relations", "no operator tables"));
    }
    for b in &c.bubbles {
        let at = c.index_of_weight(&b.cw.weight).map_or("?", name);
        let conv = b.convolution();
        let bad = conv.iter().find(|(j, v)| if *j == -2 { !v.is_one() } else { !v.is_zero() });
        c4.push(item(format!("bubble inversion for {} at {}", d.label(b.cw.color), at), bad.is_none(), || {
            let (j, v) = bad.unwrap();
            format!("total dot count {j} gives {}", crate::algebra::format_rational(v))
        }));
    }
    for (what, why) in [
        ("opposite-crossing cancellation with t_ij", "operator tables carry no cups or caps"),
        ("cross-and-cap relations", "operator tables carry no cups or caps"),
        ("biadjunction zigzags", "operator tables carry no cups or caps"),
        ("cyclicity of psi (double dual t_ij/t_ji)", "needs full dual data"),
    ] {
        c4.push(not_checked(what, why));
    }

    // (5) E_j F_i = F_i E_j for i != j
    let mut c5 = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for w in 0..nw {
                let dim = c.weights[w].dim;
                if dim == 0 {
                    continue;
                }
                let target = c.weights[w].weight.sub(&d.simple_root(i)).add(&d.simple_root(j));
                let rows = c.index_of_weight(&target).map_or(0, |k| c.weights[k].dim);
                let ef = compose(c.neighbor(d, false, i, w).and_then(|t| c.op(d, true, j, t)), c.op(d, false, i, w), rows, dim);
                let fe = compose(c.neighbor(d, true, j, w).and_then(|t| c.op(d, false, i, t)), c.op(d, true, j, w), rows, dim);
                c5.push(item(format!("E_{} F_{} = F_{} E_{} at {}", d.label(j), d.label(i), d.label(i), d.label(j), name(w)), ef == fe, || {
                    first_difference(&ef, &fe)
                }));
            }
        }
    }

    Ok(CertReport {
        conditions: vec![
            ConditionReport { number: 1, title: "integrability", items: c1 },
            ConditionReport { number: 2, title: "positivity", items: c2 },
            ConditionReport { number: 3, title: "commutator decomposition", items: c3 },
            ConditionReport { number: 4, title: "KLR action", items: c4 },
            ConditionReport { number: 5, title: "mixed commutation", items: c5 },
        ],
        summands,
    })
}

/// Weights in the Weyl orbit of `lambda` (finite type), found by reflecting.
fn weyl_orbit(d: &RootDatum, lambda: &Weight, limit: usize) -> BTreeSet<Weight> {
    let mut seen = BTreeSet::from([lambda.clone()]);
    let mut stack = vec![lambda.clone()];
    while let Some(mu) = stack.pop() {
        for i in 0..d.rank() {
            let r = mu.sub(&d.simple_root(i).scale(mu.0[i]));
            if seen.len() < limit && seen.insert(r.clone()) {
                stack.push(r);
            }
        }
    }
    seen
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GroundTruthError {
    #[error("module is truncated; a ground-truth candidate needs every weight space")]
    Truncated,
    #[error("matrix entry {0} is not a Laurent polynomial")]
    NotLaurent(String),
}

fn to_laurent(m: &Matrix<RatFunc>) -> Result<LM, GroundTruthError> {
    let mut out = LM::zeros(m.rows(), m.cols());
    for (r, c, x) in m.entries() {
        out.set(r, c, x.as_laurent().ok_or_else(|| GroundTruthError::NotLaurent(x.to_string()))?.clone());
    }
    Ok(out)
}

fn lcm(a: &DensePoly, b: &DensePoly) -> DensePoly {
    let (q, _) = a.mul(b).div_rem(&DensePoly::gcd(a, b));
    q.monic()
}

/// `diag(left) * m * diag(right)^-1`
fn rescale(m: &Matrix<RatFunc>, left: &[RatFunc], right: &[RatFunc]) -> Matrix<RatFunc> {
    let mut out = m.clone();
    for (r, c, x) in m.entries() {
        out.set(r, c, left[r].clone() * x.clone() * right[c].inv());
    }
    out
}

/// Builds the candidate whose multiplicity matrices are the `E_i`, `F_i`
/// matrices of a completely built `V(lambda)`.
///
/// The word basis of a weight space can make `F_i` non-integral (a word may
/// be `[2]` times another), so each basis vector is first divided by the
/// least common denominator of the `F` entries landing on it, working down
/// from the highest weight.
///
/// Endomorphism data is filled in where the ground truth is known: for rank 1
/// the weight space at depth `k` of `V(n)` is modelled on `T^* Gr(k, n)`, whose
/// cohomology has Poincare polynomial `q^{k(n-k)} [n choose k]`; extremal
/// weights carry a point, with graded dimension 1.
pub fn candidate_from_module(d: &RootDatum, m: &IntegrableModule) -> Result<CandidateAction, GroundTruthError> {
    if !m.complete {
        return Err(GroundTruthError::Truncated);
    }
    let mut c = CandidateAction::empty();
    let orbit = weyl_orbit(d, &m.lambda, 10_000);
    let spaces: Vec<_> = m.spaces().collect();
    for (k, sp) in spaces.iter().enumerate() {
        let end_dims = if d.rank() == 1 {
            let (nn, kk) = (m.lambda.0[0], sp.beta[0]);
            Some(vec![quantum_binomial(nn, kk).shift(kk * (nn - kk)); sp.dim()])
        } else if orbit.contains(&sp.weight) && sp.dim() == 1 {
            Some(vec![LaurentPoly::one()])
        } else {
            None
        };
        c.weights.push(WeightEntry { name: format!("w{k}"), weight: sp.weight.clone(), dim: sp.dim(), end_dims });
    }

    let mut by_height: Vec<usize> = (0..spaces.len()).collect();
    by_height.sort_by_key(|&k| (spaces[k].beta.iter().sum::<i64>(), k));
    let mut scale: Vec<Vec<RatFunc>> = spaces.iter().map(|sp| vec![RatFunc::one(); sp.dim()]).collect();
    for &b in &by_height {
        let mut dens = vec![DensePoly::one(); spaces[b].dim()];
        for i in 0..d.rank() {
            let Some(a) = c.neighbor(d, true, i, b) else { continue };
            let Some(mat) = m.op(false, i, &spaces[a].beta) else { continue };
            let ones = vec![RatFunc::one(); spaces[b].dim()];
            for (r, _, x) in rescale(&mat, &ones, &scale[a]).entries() {
                dens[r] = lcm(&dens[r], x.denominator());
            }
        }
        scale[b] = dens.iter().map(|p| RatFunc::from_laurent(p.to_laurent())).collect();
    }

    for (k, sp) in spaces.iter().enumerate() {
        for i in 0..d.rank() {
            for raise in [true, false] {
                let Some(t) = c.neighbor(d, raise, i, k) else { continue };
                if let Some(mat) = m.op(raise, i, &sp.beta) {
                    if mat.rows() > 0 {
                        let map = if raise { &mut c.e } else { &mut c.f };
                        map.insert((i, k), to_laurent(&rescale(&mat, &scale[t], &scale[k]))?);
                    }
                }
            }
        }
    }
    Ok(c)
}
