//! The defining relations, instantiated on concrete words and checked against
//! interchangeable backends.

use std::fmt;

use super::{all_words, gens_display, Gen, GenTerm, Rewriter};
use crate::algebra::{rat, Rational};
use crate::polyrep::{act_string, MultiPoly, PolyVector};
use crate::rootdata::RootDatum;

/// One relation `lhs = rhs`, both sides applied to `e(word)`.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub name: &'static str,
    pub word: Vec<usize>,
    pub lhs: Vec<GenTerm>,
    pub rhs: Vec<GenTerm>,
}

impl RelationInstance {
    pub fn display(&self, d: &RootDatum) -> String {
        let side = |terms: &[GenTerm]| {
            if terms.is_empty() {
                return "0".to_string();
            }
            terms
                .iter()
                .map(|(c, g)| {
                    let mut gens = g.clone();
                    gens.push(Gen::Idem(self.word.clone()));
                    let body = gens_display(d, &gens);
                    if c == &rat(1) {
                        body
                    } else {
                        format!("{}*{}", crate::algebra::format_rational(c), body)
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{}: {} = {}", self.name, side(&self.lhs), side(&self.rhs))
    }
}

fn one(gens: Vec<Gen>) -> GenTerm {
    (rat(1), gens)
}

/// Every relation instance on words of length `n` over `pool`, grouped by word
/// and ordered: idempotents, dot slides, commutations, double crossings, braids.
pub fn relation_instances(d: &RootDatum, n: usize, pool: &[usize]) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for word in all_words(pool, n) {
        instances_for_word(d, &word, &mut out);
    }
    out
}

fn instances_for_word(d: &RootDatum, word: &[usize], out: &mut Vec<RelationInstance>) {
    let n = word.len();
    let w = word.to_vec();
    let push = |out: &mut Vec<RelationInstance>, name, lhs, rhs| {
        out.push(RelationInstance { name, word: w.clone(), lhs, rhs });
    };
    push(out, "idempotent", vec![one(vec![Gen::Idem(w.clone())])], vec![one(vec![])]);
    for other in super::rearrangements(word) {
        if other != w {
            push(out, "orthogonal idempotents", vec![one(vec![Gen::Idem(other)])], vec![]);
            break;
        }
    }
    for k in 0..n {
        for l in k + 1..n {
            push(
                out,
                "dots commute",
                vec![one(vec![Gen::Dot(k), Gen::Dot(l)])],
                vec![one(vec![Gen::Dot(l), Gen::Dot(k)])],
            );
        }
    }
    for k in 0..n.saturating_sub(1) {
        let same = word[k] == word[k + 1];
        let delta = |v: &mut Vec<GenTerm>| {
            if same {
                v.push(one(vec![]));
            }
        };
        // y_k psi_k = psi_k y_{k+1} + delta
        let mut rhs = vec![one(vec![Gen::Psi(k), Gen::Dot(k + 1)])];
        delta(&mut rhs);
        push(out, "dot slide (top left)", vec![one(vec![Gen::Dot(k), Gen::Psi(k)])], rhs);
        // psi_k y_k = y_{k+1} psi_k + delta
        let mut rhs = vec![one(vec![Gen::Dot(k + 1), Gen::Psi(k)])];
        delta(&mut rhs);
        push(out, "dot slide (bottom left)", vec![one(vec![Gen::Psi(k), Gen::Dot(k)])], rhs);
        for l in 0..n {
            if l != k && l != k + 1 {
                push(
                    out,
                    "distant dot",
                    vec![one(vec![Gen::Dot(l), Gen::Psi(k)])],
                    vec![one(vec![Gen::Psi(k), Gen::Dot(l)])],
                );
            }
        }
    }
    for k in 0..n.saturating_sub(1) {
        for l in k + 2..n.saturating_sub(1) {
            push(
                out,
                "distant crossings",
                vec![one(vec![Gen::Psi(k), Gen::Psi(l)])],
                vec![one(vec![Gen::Psi(l), Gen::Psi(k)])],
            );
        }
    }
    for k in 0..n.saturating_sub(1) {
        let rhs = if word[k] == word[k + 1] {
            vec![]
        } else {
            let q = d.q_polynomial(word[k], word[k + 1]).expect("labels differ");
            vec![one(vec![Gen::Poly(MultiPoly::from_bivariate(n, &q, k, k + 1))])]
        };
        push(out, "double crossing", vec![one(vec![Gen::Psi(k), Gen::Psi(k)])], rhs);
    }
    for a in 0..n.saturating_sub(2) {
        let lhs = vec![
            one(vec![Gen::Psi(a), Gen::Psi(a + 1), Gen::Psi(a)]),
            (rat(-1), vec![Gen::Psi(a + 1), Gen::Psi(a), Gen::Psi(a + 1)]),
        ];
        let (x, y, z) = (word[a], word[a + 1], word[a + 2]);
        let rhs = if x == z && x != y {
            vec![one(vec![Gen::Poly(braid_rhs(d, n, a, x, y))])]
        } else {
            vec![]
        };
        push(out, "braid", lhs, rhs);
    }
}

/// Braid correction computed independently of the rewriter: the exact quotient
/// `(Q(y_a, y_{a+1}) - Q(y_{a+2}, y_{a+1})) / (y_a - y_{a+2})` via a divided
/// difference after moving `y_{a+2}` next to `y_a`.
fn braid_rhs(d: &RootDatum, n: usize, a: usize, x: usize, y: usize) -> MultiPoly {
    let q = d.q_polynomial(x, y).expect("labels differ");
    // Work in variables (y_a, y_{a+2}, y_{a+1}) so the divided difference acts on adjacent slots.
    let mut tmp = MultiPoly::zero(3);
    for ((m, k), c) in q.terms() {
        tmp.add_term(vec![m, 0, k], c.clone());
    }
    let quotient = tmp.divided_difference(0).expect("three variables");
    let mut out = MultiPoly::zero(n);
    for (e, c) in quotient.terms() {
        let mut v = vec![0; n];
        v[a] = e[0];
        v[a + 2] = e[1];
        v[a + 1] = e[2];
        out.add_term(v, c.clone());
    }
    out
}

/// A way of evaluating both sides of a relation.
pub trait Backend {
    fn name(&self) -> &str;
    /// `None` when the two sides agree, otherwise a description of the difference.
    fn check(&self, inst: &RelationInstance) -> Result<Option<String>, String>;
}

/// Compares normal forms produced by the rewriter.
pub struct RewritingBackend<'a> {
    pub rw: Rewriter<'a>,
}

impl Backend for RewritingBackend<'_> {
    fn name(&self) -> &str {
        "rewriting"
    }

    fn check(&self, inst: &RelationInstance) -> Result<Option<String>, String> {
        let l = self.rw.normalize_terms(&inst.lhs, &inst.word).map_err(|e| e.to_string())?;
        let r = self.rw.normalize_terms(&inst.rhs, &inst.word).map_err(|e| e.to_string())?;
        let d = self.rw.datum();
        Ok((l != r).then(|| format!("lhs = {}, rhs = {}", l.display(d), r.display(d))))
    }
}

/// Compares the actions of both sides on every monomial `y^a e(word)` up to a degree.
pub struct PolyRepBackend<'a> {
    pub d: &'a RootDatum,
    pub max_deg: i64,
}

impl Backend for PolyRepBackend<'_> {
    fn name(&self) -> &str {
        "polynomial representation"
    }

    fn check(&self, inst: &RelationInstance) -> Result<Option<String>, String> {
        let n = inst.word.len();
        for exps in MultiPoly::monomials_up_to(n, self.max_deg) {
            let v = PolyVector::basis(inst.word.clone(), MultiPoly::monomial(exps.clone(), rat(1)));
            let l = eval_poly(self.d, &inst.lhs, &v)?;
            let r = eval_poly(self.d, &inst.rhs, &v)?;
            if l != r {
                let m = MultiPoly::monomial(exps, rat(1));
                return Ok(Some(format!("differs on {} e({})", m, self.d.word_string(&inst.word))));
            }
        }
        Ok(None)
    }
}

fn eval_poly(d: &RootDatum, terms: &[GenTerm], v: &PolyVector) -> Result<PolyVector, String> {
    let mut out = PolyVector::zero(v.strands());
    for (c, gens) in terms {
        let w = act_string(d, gens, v).map_err(|e| e.to_string())?;
        out = out.add(&w.scale(c));
    }
    Ok(out)
}

/// First failing instance, with the backend's description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub backend: String,
    pub relation: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackendReport {
    pub backend: String,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<Counterexample>,
}

impl BackendReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Runs every instance through one backend.
pub fn run_backend(d: &RootDatum, backend: &dyn Backend, instances: &[RelationInstance]) -> BackendReport {
    let mut report =
        BackendReport { backend: backend.name().to_string(), checked: 0, failed: 0, first_failure: None };
    for inst in instances {
        report.checked += 1;
        let outcome = match backend.check(inst) {
            Ok(None) => continue,
            Ok(Some(detail)) => detail,
            Err(e) => format!("error: {e}"),
        };
        report.failed += 1;
        if report.first_failure.is_none() {
            report.first_failure = Some(Counterexample {
                backend: backend.name().to_string(),
                relation: inst.display(d),
                detail: outcome,
            });
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub strands: usize,
    pub instances: usize,
    pub backends: Vec<BackendReport>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.backends.iter().all(|b| b.passed())
    }

    pub fn first_failure(&self) -> Option<&Counterexample> {
        self.backends.iter().find_map(|b| b.first_failure.as_ref())
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} relation instances on {} strands", self.instances, self.strands)?;
        for b in &self.backends {
            writeln!(f, "  {}: {} checked, {} failed", b.backend, b.checked, b.failed)?;
            if let Some(c) = &b.first_failure {
                writeln!(f, "    first failure: {}", c.relation)?;
                writeln!(f, "    {}", c.detail)?;
            }
        }
        Ok(())
    }
}

/// Default degree bound for monomials fed to the polynomial backend.
pub const DEFAULT_POLY_DEGREE: i64 = 6;

/// Checks every relation on words of length `n` over `pool` with rewriting and
/// with the polynomial representation.
pub fn check_relations(d: &RootDatum, n: usize, pool: &[usize], poly_degree: i64) -> RelationReport {
    let instances = relation_instances(d, n, pool);
    let rw = RewritingBackend { rw: Rewriter::new(d) };
    let pr = PolyRepBackend { d, max_deg: poly_degree };
    RelationReport {
        strands: n,
        instances: instances.len(),
        backends: vec![run_backend(d, &rw, &instances), run_backend(d, &pr, &instances)],
    }
}

/// Scalar helper used by callers that build instances by hand.
pub fn scalar_term(c: Rational, gens: Vec<Gen>) -> GenTerm {
    (c, gens)
}
