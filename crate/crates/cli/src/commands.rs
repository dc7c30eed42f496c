//! Command dispatch: each command reads its parameters, calls the library and
//! fills a [`Report`].

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use klr_core::algebra::{format_rational, parse_rational, Rational};
use klr_core::klr::cyclotomic::{cyclotomic_quotient, MatrixBackend};
use klr_core::klr::expr::evaluate;
use klr_core::klr::relations::{check_relations, relation_instances, run_backend, DEFAULT_POLY_DEGREE};
use klr_core::klr::{graded_dim_hom, Rewriter};
use klr_core::polyrep::{act_element, MultiPoly, PolyVector};
use klr_core::rootdata::{RootDatum, Weight};
use klr_core::ucat::{
    candidate_from_module, certify, one_mor_weight, parse_diagram, solve_fake_bubbles, word_string, CandidateAction,
    RealBubbles, Rotation, Status as CertStatus,
};
use klr_core::uqrep::{
    build_module, cyclotomic_dimension_oracle, nakajima_nonempty, period_class, quiver_space_dims, string_finiteness,
    twist_class_coordinates, twist_integrality, verify_uq_relations, WeightMultiplicities, FAMILIES,
};
use serde_json::{json, Value};

use crate::config::{Task, WorkbenchConfig};
use crate::report::Report;

pub const COMMANDS: &[&str] = &[
    "klr-mul",
    "klr-dim",
    "klr-check",
    "cyclotomic",
    "bubble-solve",
    "certify",
    "uq-build",
    "uq-verify",
    "quiver-dims",
    "period",
    "twist-check",
    "nakajima-nonempty",
    "degree",
];

/// Library operation, the command reaching it, and the payload key it fills.
pub const COVERAGE: &[(&str, &str, &str)] = &[
    ("build_root_datum", "klr-check", "scalars"),
    ("q_polynomial", "klr-check", "scalars"),
    ("t_scalar", "klr-check", "scalars"),
    ("quantum_integer", "certify", "summands"),
    ("cartan_pairing", "quiver-dims", "pairings"),
    ("mu_from_dimvec", "quiver-dims", "mu"),
    ("divided_difference", "klr-mul", "action"),
    ("act_element", "klr-mul", "action"),
    ("multiply", "klr-mul", "result"),
    ("degree", "klr-mul", "degree"),
    ("graded_dim_hom", "klr-dim", "graded dim"),
    ("check_relations", "klr-check", "backends"),
    ("cyclotomic_quotient", "cyclotomic", "basis"),
    ("one_mor_weight", "degree", "weight change"),
    ("diagram_degree", "degree", "degree"),
    ("solve_fake_bubbles", "bubble-solve", "clockwise"),
    ("certify", "certify", "conditions"),
    ("freudenthal_multiplicity", "uq-build", "spaces"),
    ("build_module", "uq-build", "spaces"),
    ("verify_uq_relations", "uq-verify", "families"),
    ("nakajima_nonempty", "nakajima-nonempty", "nonempty"),
    ("quiver_space_dims", "quiver-dims", "expected dim"),
    ("period_class", "period", "coefficients"),
    ("twist_integrality", "twist-check", "integral"),
];

/// The parameter a bare positional argument stands for.
pub fn primary_param(command: &str) -> Option<&'static str> {
    Some(match command {
        "klr-mul" => "expr",
        "klr-dim" => "i",
        "klr-check" => "strands",
        "cyclotomic" | "uq-build" | "uq-verify" | "quiver-dims" | "period" | "nakajima-nonempty" => "weight",
        "bubble-solve" => "vertex",
        "certify" => "fixture",
        "degree" => "diagram",
        _ => return None,
    })
}

#[derive(Clone, Debug)]
pub struct Settings {
    /// Default degree cutoff when a command takes one and none is given.
    pub deg_cutoff: i64,
    pub jobs: usize,
    /// Relative fixture paths are resolved against this directory.
    pub base_dir: PathBuf,
}

impl Default for Settings {
    fn default() -> Self {
        Self { deg_cutoff: 12, jobs: 1, base_dir: PathBuf::from(".") }
    }
}

impl Settings {
    /// Defaults overridden by `KLRW_DEG_CUTOFF` and `KLRW_JOBS`.
    pub fn from_env() -> Result<Self, String> {
        let mut s = Self::default();
        if let Ok(v) = std::env::var("KLRW_DEG_CUTOFF") {
            s.deg_cutoff = v.trim().parse().map_err(|_| format!("KLRW_DEG_CUTOFF must be an integer, got '{v}'"))?;
        }
        if let Ok(v) = std::env::var("KLRW_JOBS") {
            s.jobs = match v.trim().parse::<usize>() {
                Ok(n) if n >= 1 => n,
                _ => return Err(format!("KLRW_JOBS must be a positive integer, got '{v}'")),
            };
        }
        Ok(s)
    }
}

struct Args<'a> {
    cfg: &'a WorkbenchConfig,
    params: &'a [(String, String)],
    used: RefCell<BTreeSet<String>>,
}

type R<T> = Result<T, String>;

fn items(s: &str) -> Vec<&str> {
    s.split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')').filter(|t| !t.is_empty()).collect()
}

impl<'a> Args<'a> {
    fn d(&self) -> &'a RootDatum {
        &self.cfg.datum
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.used.borrow_mut().insert(key.to_string());
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn req(&self, key: &str) -> R<&'a str> {
        self.get(key).ok_or_else(|| format!("missing parameter '{key}'"))
    }

    fn int(&self, key: &str, default: i64) -> R<i64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.trim().parse().map_err(|_| format!("parameter '{key}' must be an integer, got '{v}'")),
        }
    }

    fn flag(&self, key: &str) -> R<bool> {
        match self.get(key) {
            None => Ok(false),
            Some("yes" | "true") => Ok(true),
            Some("no" | "false") => Ok(false),
            Some(v) => Err(format!("parameter '{key}' must be yes or no, got '{v}'")),
        }
    }

    fn ints(&self, key: &str) -> R<Vec<i64>> {
        let v = self.req(key)?;
        let out: R<Vec<i64>> =
            items(v).into_iter().map(|t| t.parse().map_err(|_| format!("'{t}' in '{key}' is not an integer"))).collect();
        let out = out?;
        if out.len() != self.d().rank() {
            return Err(format!("'{key}' needs {} entries, got {}", self.d().rank(), out.len()));
        }
        Ok(out)
    }

    fn rationals(&self, key: &str) -> R<Vec<Rational>> {
        let v = self.req(key)?;
        items(v).into_iter().map(|t| parse_rational(t).ok_or_else(|| format!("'{t}' in '{key}' is not a rational"))).collect()
    }

    /// A weight by config name or as inline coroot values.
    fn weight(&self, key: &str) -> R<Weight> {
        let v = self.req(key)?;
        if let Some(w) = self.cfg.weight(v.trim()) {
            return Ok(w.weight.clone());
        }
        let coords: Result<Vec<i64>, _> = items(v).into_iter().map(str::parse::<i64>).collect();
        match coords {
            Ok(c) if c.len() == self.d().rank() => Ok(Weight(c)),
            Ok(c) if !c.is_empty() => Err(format!("weight '{v}' needs {} coroot values, got {}", self.d().rank(), c.len())),
            _ => Err(format!("unknown weight '{v}'")),
        }
    }

    fn dominant(&self, key: &str) -> R<Weight> {
        let w = self.weight(key)?;
        self.d().check_dominant(&w).map_err(|e| format!("parameter '{key}': {e}"))?;
        Ok(w)
    }

    fn vertex(&self, key: &str) -> R<usize> {
        let v = self.req(key)?.trim();
        self.d().index_of(v).ok_or_else(|| format!("unknown vertex '{v}'"))
    }

    fn word(&self, key: &str) -> R<Vec<usize>> {
        let v = self.req(key)?;
        let toks = items(v);
        let d = self.d();
        if toks.len() == 1 && d.index_of(toks[0]).is_none() && toks[0].chars().all(|c| d.index_of(&c.to_string()).is_some()) {
            return Ok(toks[0].chars().map(|c| d.index_of(&c.to_string()).unwrap()).collect());
        }
        toks.into_iter().map(|t| d.index_of(t).ok_or_else(|| format!("unknown vertex '{t}'"))).collect()
    }

    fn finish(&self) -> R<()> {
        let used = self.used.borrow();
        match self.params.iter().find(|(k, _)| !used.contains(k)) {
            Some((k, _)) => Err(format!("unknown parameter '{k}'")),
            None => Ok(()),
        }
    }
}

fn rat_str(r: &Rational) -> String {
    format_rational(r)
}

fn beta_str(b: &[i64]) -> String {
    format!("({})", b.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

fn poly_vector_string(d: &RootDatum, v: &PolyVector) -> String {
    let parts: Vec<String> =
        v.components().filter(|(_, f)| !f.is_zero()).map(|(w, f)| format!("({f}) e({})", d.word_string(w))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Runs one command against the config.
pub fn run_command(cfg: &WorkbenchConfig, settings: &Settings, task: &str, command: &str, params: &[(String, String)]) -> Report {
    let mut rep = Report::new(task, command, params);
    let a = Args { cfg, params, used: RefCell::new(BTreeSet::new()) };
    let res = match command {
        "klr-mul" => klr_mul(&a, &mut rep),
        "klr-dim" => klr_dim(&a, settings, &mut rep),
        "klr-check" => klr_check(&a, &mut rep),
        "cyclotomic" => cyclotomic(&a, settings, &mut rep),
        "bubble-solve" => bubble_solve(&a, settings, &mut rep),
        "certify" => certify_cmd(&a, settings, &mut rep),
        "uq-build" => uq_build(&a, settings, &mut rep),
        "uq-verify" => uq_verify(&a, &mut rep),
        "quiver-dims" => quiver_dims(&a, &mut rep),
        "period" => period(&a, &mut rep),
        "twist-check" => twist_check(&a, &mut rep),
        "nakajima-nonempty" => nonempty(&a, &mut rep),
        "degree" => degree(&a, &mut rep),
        _ => Err(format!("unknown command '{command}'; expected one of {}", COMMANDS.join(", "))),
    }
    .and_then(|()| a.finish());
    match res {
        Ok(()) => rep,
        Err(msg) => Report::error(task, command, params, msg),
    }
}

/// Runs every task, `settings.jobs` at a time; reports keep declaration order.
pub fn run_tasks(cfg: &WorkbenchConfig, settings: &Settings, tasks: &[Task]) -> Vec<Report> {
    let run = |t: &Task| run_command(cfg, settings, &t.id, &t.command, &t.params);
    if settings.jobs <= 1 || tasks.len() <= 1 {
        return tasks.iter().map(run).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Report>>> = tasks.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..settings.jobs.min(tasks.len()) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= tasks.len() {
                    break;
                }
                *slots[k].lock().unwrap() = Some(run(&tasks[k]));
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().expect("every task ran")).collect()
}

fn klr_mul(a: &Args, rep: &mut Report) -> R<()> {
    let d = a.d();
    let expr = a.req("expr")?;
    let act = a.get("act-degree").map(|v| v.parse::<i64>().map_err(|_| format!("act-degree must be an integer, got '{v}'")));
    let x = evaluate(d, expr).map_err(|e| e.to_string())?;
    rep.put("result", x.display(d));
    rep.put("terms", x.len());
    rep.put("degree", match x.homogeneous_degree(d) {
        Some(g) => json!(g),
        None if x.is_zero() => json!("zero"),
        None => json!("inhomogeneous"),
    });
    if let Some(act) = act {
        let act = act?;
        let words: BTreeSet<Vec<usize>> = x.terms().map(|(b, _)| b.word.clone()).collect();
        let mut rows = Vec::new();
        for w in words {
            for m in MultiPoly::monomials_up_to(w.len(), act) {
                let f = MultiPoly::monomial(m, Rational::from_integer(1.into()));
                let v = PolyVector::basis(w.clone(), f);
                let out = act_element(d, &x, &v).map_err(|e| e.to_string())?;
                rows.push(json!({ "input": poly_vector_string(d, &v), "output": poly_vector_string(d, &out) }));
            }
        }
        rep.put("action", rows);
    }
    Ok(())
}

fn klr_dim(a: &Args, s: &Settings, rep: &mut Report) -> R<()> {
    let d = a.d();
    let i = a.word("i")?;
    let j = if a.get("j").is_some() { a.word("j")? } else { i.clone() };
    let max = a.int("max-deg", s.deg_cutoff)?;
    rep.put("i", d.word_string(&i));
    rep.put("j", d.word_string(&j));
    rep.put("max-deg", max);
    rep.put("graded dim", graded_dim_hom(d, &i, &j, max).to_string());
    Ok(())
}

fn klr_check(a: &Args, rep: &mut Report) -> R<()> {
    let base = a.d();
    let n = a.int("strands", 0)?;
    if !(1..=6).contains(&n) {
        return Err(format!("strands must be between 1 and 6, got {n}"));
    }
    let pool = if a.get("pool").is_some() { a.word("pool")? } else { (0..base.rank()).collect() };
    let poly_degree = a.int("poly-degree", DEFAULT_POLY_DEGREE)?;
    let corrupted;
    let d = match a.get("corrupt-t") {
        Some(v) => {
            let ends = items(v);
            let idx: R<Vec<usize>> =
                ends.iter().map(|t| base.index_of(t).ok_or_else(|| format!("unknown vertex '{t}'"))).collect();
            match idx?.as_slice() {
                [i, j] if i != j => corrupted = base.with_corrupted_t(*i, *j),
                _ => return Err("corrupt-t needs two distinct vertices".into()),
            }
            &corrupted
        }
        None => base,
    };
    let mut scalars = Vec::new();
    for i in 0..d.rank() {
        for j in 0..d.rank() {
            if i != j {
                let q = d.q_polynomial(i, j).map_err(|e| e.to_string())?;
                scalars.push(json!({ "i": d.label(i), "j": d.label(j), "t": d.t_scalar(i, j), "Q": q.to_string() }));
            }
        }
    }
    rep.put("scalars", scalars);
    let r = check_relations(d, n as usize, &pool, poly_degree);
    rep.put("instances", r.instances);
    let rows: Vec<Value> =
        r.backends.iter().map(|b| json!({ "backend": b.backend, "checked": b.checked, "failed": b.failed })).collect();
    rep.put("backends", rows);
    rep.require(r.passed(), || {
        let f = r.first_failure().unwrap();
        format!("{}: {}: {}", f.backend, f.relation, f.detail)
    });
    Ok(())
}

fn cyclotomic(a: &Args, s: &Settings, rep: &mut Report) -> R<()> {
    let d = a.d();
    let lam = a.dominant("weight")?;
    let nu = a.ints("nu")?;
    let cap = a.int("deg-cap", s.deg_cutoff)?;
    let tables = a.flag("check-tables")?;
    let q = cyclotomic_quotient(d, &lam, &nu, cap).map_err(|e| e.to_string())?;
    rep.put("deg-cap", cap);
    rep.put("dimension", q.dimension());
    rep.put("graded dim", q.graded_dim.to_string());
    rep.put("stabilized", q.stabilized());
    let basis: Vec<Value> =
        q.basis.iter().zip(&q.degrees).map(|(b, g)| json!({ "degree": g, "element": b.display(d) })).collect();
    rep.put("basis", basis);
    let oracle = cyclotomic_dimension_oracle(d, &lam, &nu).map_err(|e| e.to_string())?;
    rep.put("oracle dimension", rat_str(&oracle));
    rep.require(q.stabilized(), || format!("quotient not shown to vanish above degree {cap}; raise deg-cap"));
    rep.require(oracle == Rational::from_integer((q.dimension() as i64).into()), || {
        format!("dimension {} but the Shapovalov oracle gives {}", q.dimension(), rat_str(&oracle))
    });
    if tables {
        let t = q.operator_tables(&Rewriter::new(d)).map_err(|e| e.to_string())?;
        let pool: Vec<usize> = (0..d.rank()).filter(|&i| nu[i] > 0).collect();
        let insts = relation_instances(d, t.strands, &pool);
        let r = run_backend(d, &MatrixBackend { tables: &t }, &insts);
        rep.put("table relations", json!({ "checked": r.checked, "failed": r.failed }));
        rep.require(r.passed(), || {
            let f = r.first_failure.clone().unwrap();
            format!("operator tables: {}: {}", f.relation, f.detail)
        });
    }
    Ok(())
}

fn bubble_values(v: Option<&str>) -> R<std::collections::BTreeMap<i64, Rational>> {
    let mut out = std::collections::BTreeMap::new();
    for tok in v.map(items).unwrap_or_default() {
        let (m, x) = tok.split_once(':').ok_or_else(|| format!("bubble entry '{tok}' should be <dots>:<value>"))?;
        let m: i64 = m.parse().map_err(|_| format!("dot count '{m}' is not an integer"))?;
        let x = parse_rational(x).ok_or_else(|| format!("bubble value '{x}' is not a rational"))?;
        if out.insert(m, x).is_some() {
            return Err(format!("dot count {m} given twice"));
        }
    }
    Ok(out)
}

fn bubble_solve(a: &Args, s: &Settings, rep: &mut Report) -> R<()> {
    let d = a.d();
    let i = a.vertex("vertex")?;
    let lam = a.weight("weight")?;
    let real = RealBubbles { cw: bubble_values(a.get("cw"))?, ccw: bubble_values(a.get("ccw"))? };
    let max = a.int("max-deg", s.deg_cutoff)?;
    let p = solve_fake_bubbles(d, i, &lam, &real, max).map_err(|e| e.to_string())?;
    rep.put("max-deg", max);
    for (key, rot) in [("clockwise", Rotation::Clockwise), ("counterclockwise", Rotation::Counterclockwise)] {
        let ser = p.series(rot);
        let rows: Vec<Value> = ser
            .values
            .iter()
            .map(|(m, v)| {
                let kind = if *m < 0 { "fake" } else { "real" };
                json!({ "dots": m, "degree": klr_core::ucat::bubble_degree(rot, lam.0[i], *m), "value": rat_str(v), "kind": kind })
            })
            .collect();
        rep.put(key, rows);
    }
    rep.require(p.inversion_holds(), || "convolution does not reproduce the identity".into());
    Ok(())
}

fn certify_cmd(a: &Args, s: &Settings, rep: &mut Report) -> R<()> {
    let d = a.d();
    let cand = match (a.get("fixture"), a.get("module")) {
        (Some(path), None) => {
            let full = resolve(&s.base_dir, path);
            let text = std::fs::read_to_string(&full).map_err(|e| format!("cannot read {path}: {e}"))?;
            CandidateAction::parse(d, &text).map_err(|e| format!("{path}: {e}"))?
        }
        (None, Some(_)) => {
            let lam = a.dominant("module")?;
            let depth = a.int("depth", 8)?.max(0) as usize;
            let m = build_module(d, &lam, depth).map_err(|e| e.to_string())?;
            candidate_from_module(d, &m).map_err(|e| e.to_string())?
        }
        _ => return Err("certify needs exactly one of 'fixture' or 'module'".into()),
    };
    let r = certify(d, &cand).map_err(|e| e.to_string())?;
    let count = |c: &klr_core::ucat::ConditionReport, st: CertStatus| c.items.iter().filter(|i| i.status == st).count();
    let rows: Vec<Value> = r
        .conditions
        .iter()
        .map(|c| {
            json!({
                "condition": format!("({})", c.number),
                "title": c.title,
                "status": c.status().to_string(),
                "passed": count(c, CertStatus::Pass),
                "failed": count(c, CertStatus::Fail),
                "not checked": count(c, CertStatus::NotChecked),
            })
        })
        .collect();
    rep.put("conditions", rows);
    let summands: Vec<Value> = r
        .summands
        .iter()
        .map(|s| json!({ "vertex": d.label(s.vertex), "weight": s.weight, "pairing": s.pairing, "summand": s.value.to_string() }))
        .collect();
    rep.put("summands", summands);
    let skipped: BTreeSet<String> = r
        .conditions
        .iter()
        .flat_map(|c| c.items.iter().filter(|i| i.status == CertStatus::NotChecked).map(move |i| format!("({}) {}", c.number, i.name)))
        .collect();
    rep.put("not checked", skipped.into_iter().collect::<Vec<_>>());
    for c in &r.conditions {
        for it in c.items.iter().filter(|i| i.status == CertStatus::Fail) {
            rep.require(false, || format!("({}) {}: {}", c.number, it.name, it.witness.clone().unwrap_or_default()));
        }
    }
    if r.all_passed() {
        rep.require(true, String::new);
    }
    Ok(())
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn words_string(d: &RootDatum, w: &[usize]) -> String {
    if w.is_empty() {
        "v".into()
    } else {
        format!("{} v", w.iter().map(|&i| format!("F{}", d.label(i))).collect::<Vec<_>>().join(" "))
    }
}

fn uq_build(a: &Args, s: &Settings, rep: &mut Report) -> R<()> {
    let d = a.d();
    let lam = a.dominant("weight")?;
    let depth = a.int("depth", 4)?.max(0) as usize;
    let fixture = a.get("fixture");
    let m = build_module(d, &lam, depth).map_err(|e| e.to_string())?;
    let mut wm = WeightMultiplicities::new(d, &lam).map_err(|e| e.to_string())?;
    rep.put("complete", m.complete);
    let mut rows = Vec::new();
    let mut mismatch = None;
    for sp in m.spaces() {
        let f = wm.at_depth(&sp.beta);
        if f != sp.dim() as i64 && mismatch.is_none() {
            mismatch = Some(format!("depth {}: Shapovalov dimension {} but Freudenthal gives {f}", beta_str(&sp.beta), sp.dim()));
        }
        let basis: Vec<String> = sp.basis_words.iter().map(|w| words_string(d, w)).collect();
        rows.push(json!({
            "depth": beta_str(&sp.beta),
            "weight": sp.weight.to_string(),
            "dim": sp.dim(),
            "freudenthal": f,
            "basis": basis.join("; "),
        }));
    }
    rep.put("spaces", rows);
    rep.put("total dim", m.spaces().map(|s| s.dim()).sum::<usize>());
    rep.require(mismatch.is_none(), || mismatch.clone().unwrap());
    if let Some(path) = fixture {
        let c = candidate_from_module(d, &m).map_err(|e| e.to_string())?;
        std::fs::write(resolve(&s.base_dir, path), c.to_text(d)).map_err(|e| format!("cannot write {path}: {e}"))?;
        rep.put("fixture", path);
    }
    Ok(())
}

fn uq_verify(a: &Args, rep: &mut Report) -> R<()> {
    let d = a.d();
    let lam = a.dominant("weight")?;
    let depth = a.int("depth", 4)?.max(0) as usize;
    let m = build_module(d, &lam, depth).map_err(|e| e.to_string())?;
    let r = verify_uq_relations(d, &m);
    let rows: Vec<Value> = FAMILIES
        .iter()
        .map(|f| json!({ "family": f, "checked": r.count(f), "status": if r.passed_family(f) { "pass" } else { "fail" } }))
        .collect();
    rep.put("families", rows);
    rep.put("truncated", r.truncated);
    rep.require(r.passed(), || {
        let f = r.first_failure().unwrap();
        format!("{} {}", f.family, f.instance)
    });
    Ok(())
}

fn quiver_dims(a: &Args, rep: &mut Report) -> R<()> {
    let d = a.d();
    let lam = a.dominant("weight")?;
    let v = a.ints("v")?;
    let q = quiver_space_dims(d, &lam, &v).map_err(|e| e.to_string())?;
    let mu = d.mu_from_dimvec(&lam, &v).map_err(|e| e.to_string())?;
    rep.put("mu", mu.to_string());
    let pairings: Vec<Value> =
        (0..d.rank()).map(|i| json!({ "vertex": d.label(i), "pairing": d.cartan_pairing(&mu, i) })).collect();
    rep.put("pairings", pairings);
    rep.put("dim E", q.dim_e);
    rep.put("dim G", q.dim_g);
    rep.put("expected dim", q.expected_dim);
    Ok(())
}

fn period(a: &Args, rep: &mut Report) -> R<()> {
    let d = a.d();
    let lam = a.dominant("weight")?;
    let v = a.ints("v")?;
    let p = period_class(d, &lam, &v).map_err(|e| e.to_string())?;
    let rows: Vec<Value> =
        p.coeffs.iter().enumerate().map(|(i, c)| json!({ "vertex": d.label(i), "coefficient": rat_str(c) })).collect();
    rep.put("coefficients", rows);
    rep.put("integral", p.integral);
    rep.put("orientation independent", p.orientation_independent);
    Ok(())
}

fn twist_check(a: &Args, rep: &mut Report) -> R<()> {
    let d = a.d();
    let x = a.rationals("a")?;
    let y = a.rationals("b")?;
    let i = a.vertex("vertex")?;
    if x.len() != d.rank() || y.len() != d.rank() {
        return Err(format!("'a' and 'b' need {} entries each", d.rank()));
    }
    let ok = twist_integrality(&x, &y, i);
    let coords = twist_class_coordinates(&x, &y, i);
    let brute = coords.iter().all(klr_core::algebra::is_integer);
    rep.put("integral", ok);
    rep.put("class coordinates", coords.iter().map(rat_str).collect::<Vec<_>>());
    rep.require(ok == brute, || format!("closed form says {ok} but the class coordinates say {brute}"));
    Ok(())
}

fn nonempty(a: &Args, rep: &mut Report) -> R<()> {
    let d = a.d();
    let lam = a.dominant("weight")?;
    let v = a.ints("v")?;
    let ne = nakajima_nonempty(d, &lam, &v).map_err(|e| e.to_string())?;
    rep.put("mu", d.mu_from_dimvec(&lam, &v).map_err(|e| e.to_string())?.to_string());
    rep.put("nonempty", ne);
    if a.get("string").is_some() {
        let i = a.vertex("string")?;
        let margin = a.int("margin", 3)?;
        let sc = string_finiteness(d, &lam, &v, i, margin).map_err(|e| e.to_string())?;
        rep.put("string", json!({ "vertex": d.label(i), "nonempty k": sc.nonempty, "window": format!("[{}, {}]", sc.lo, sc.hi) }));
        rep.put("finite", sc.finite);
        rep.require(sc.finite, || format!("{}-string through {} is not finite within the window", d.label(i), beta_str(&v)));
    }
    Ok(())
}

fn degree(a: &Args, rep: &mut Report) -> R<()> {
    let d = a.d();
    let src = a.req("diagram")?;
    let dg = parse_diagram(d, src).map_err(|e| e.to_string())?;
    let (ifaces, deg) = dg.check(d).map_err(|e| e.to_string())?;
    let top = ifaces.last().unwrap();
    rep.put("degree", deg);
    rep.put("bottom", word_string(d, &dg.bottom));
    rep.put("top", word_string(d, top));
    let change: Vec<Value> = one_mor_weight(d, top)
        .iter()
        .enumerate()
        .map(|(i, c)| json!({ "vertex": d.label(i), "coefficient": c }))
        .collect();
    rep.put("weight change", change);
    rep.put("layers", dg.layers.len());
    Ok(())
}
