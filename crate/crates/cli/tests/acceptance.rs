//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the target exits nonzero if any criterion fails. All comparisons are exact.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use klr_core::algebra::{rat, ratio, LaurentPoly, Rational};
use klr_core::klr::cyclotomic::cyclotomic_quotient;
use klr_core::klr::relations::check_relations;
use klr_core::klr::{all_words, perm, BasisElem, KlrElement, Rewriter};
use klr_core::polyrep::{act_element, MultiPoly, PolyVector};
use klr_core::rootdata::{quantum_integer, RootDatum, Weight};
use klr_core::ucat::{candidate_from_module, certify, degree_zero_dots, solve_fake_bubbles, RealBubbles, Rotation};
use klr_core::uqrep::{
    build_module, cyclotomic_dimension_oracle, freudenthal_multiplicity, period_class, string_finiteness,
    twist_class_coordinates, twist_integrality, verify_uq_relations,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn relation_suite() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for (name, d) in [
        ("A1", RootDatum::type_a(1)),
        ("A2", RootDatum::type_a(2)),
        ("A3", RootDatum::type_a(3)),
        ("affine A1", RootDatum::affine_a1()),
    ] {
        let pool: Vec<usize> = (0..d.rank()).collect();
        for n in 1..=4 {
            let r = check_relations(&d, n, &pool, 4);
            ensure(r.passed(), || format!("{name}, {n} strands: {r}"))?;
            ensure(r.backends.len() == 2, || "expected two backends".into())?;
            total += r.instances;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{total} instances on both backends in {secs:.1}s"))
}

fn random_basis(rng: &mut ChaCha8Rng, n: usize, pool: &[usize], word: Option<Vec<usize>>) -> BasisElem {
    let word = word.unwrap_or_else(|| (0..n).map(|_| pool[rng.gen_range(0..pool.len())]).collect());
    let perms = perm::all_perms(n);
    let perm = perms[rng.gen_range(0..perms.len())].clone();
    let dots = (0..n).map(|_| rng.gen_range(0..3)).collect();
    BasisElem { dots, perm, word }
}

fn oracle_equivalence() -> Outcome {
    let d = RootDatum::type_a(2);
    let rw = Rewriter::new(&d);
    let pool = [0, 1];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pairs = 0;
    let mut checks = 0;
    while pairs < 200 {
        let n = rng.gen_range(1..=3);
        let y = random_basis(&mut rng, n, &pool, None);
        let x = random_basis(&mut rng, n, &pool, Some(y.top_word()));
        if x.degree(&d).abs() > 6 || y.degree(&d).abs() > 6 {
            continue;
        }
        pairs += 1;
        let (ex, ey) = (KlrElement::basis(x), KlrElement::basis(y));
        let prod = rw.multiply(&ex, &ey).map_err(|e| e.to_string())?;
        for word in all_words(&pool, n) {
            for m in MultiPoly::monomials_up_to(n, 6) {
                let v = PolyVector::basis(word.clone(), MultiPoly::monomial(m, rat(1)));
                let lhs = act_element(&d, &prod, &v).map_err(|e| e.to_string())?;
                let inner = act_element(&d, &ey, &v).map_err(|e| e.to_string())?;
                let rhs = act_element(&d, &ex, &inner).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("pair {pairs}: product and composed action differ"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs, {checks} monomial checks"))
}

fn bubble_inversion() -> Outcome {
    let d = RootDatum::type_a(1);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let trials = 30;
    for t in 0..trials {
        let l = rng.gen_range(-5i64..=5);
        let rot = if l >= 0 { Rotation::Clockwise } else { Rotation::Counterclockwise };
        let z = degree_zero_dots(rot, l);
        let free: BTreeMap<i64, Rational> =
            (1..=6).map(|p| (z + p, ratio(rng.gen_range(-9..=9), rng.gen_range(1..=7)))).collect();
        let real = if l >= 0 {
            RealBubbles { cw: free, ccw: BTreeMap::new() }
        } else {
            RealBubbles { cw: BTreeMap::new(), ccw: free }
        };
        let pair = solve_fake_bubbles(&d, 0, &Weight(vec![l]), &real, 12).map_err(|e| format!("trial {t}: {e}"))?;
        for (j, v) in pair.convolution() {
            let want = if j == -2 { rat(1) } else { rat(0) };
            ensure(v == want, || format!("trial {t} (weight {l}): degree {j} sums to {v}"))?;
        }
    }
    Ok(format!("{trials} trials up to degree 12"))
}

fn certifier_ground_truth() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases = [
        ("sl2 1", RootDatum::type_a(1), vec![1]),
        ("sl2 2", RootDatum::type_a(1), vec![2]),
        ("sl2 3", RootDatum::type_a(1), vec![3]),
        ("A2 omega1", RootDatum::type_a(2), vec![1, 0]),
    ];
    let mut perturbations = 0;
    for (name, d, lam) in cases {
        let m = build_module(&d, &Weight(lam), 8).map_err(|e| e.to_string())?;
        let c = candidate_from_module(&d, &m).map_err(|e| format!("{name}: {e}"))?;
        let rep = certify(&d, &c).map_err(|e| e.to_string())?;
        for n in [1, 2, 3, 5] {
            ensure(rep.passed(n), || format!("{name}: condition ({n}) fails\n{rep}"))?;
        }
        ensure(!rep.summands.is_empty(), || format!("{name}: no summands"))?;
        for s in &rep.summands {
            ensure(s.value == quantum_integer(s.pairing.abs()), || {
                format!("{name}: summand at {} is {}", s.weight, s.value)
            })?;
        }
        let keys: Vec<(bool, (usize, usize))> =
            c.e.keys().map(|k| (true, *k)).chain(c.f.keys().map(|k| (false, *k))).collect();
        for t in 0..60 {
            let (raise, key) = keys[rng.gen_range(0..keys.len())];
            let mut bad = c.clone();
            let mat = if raise { bad.e.get_mut(&key) } else { bad.f.get_mut(&key) }.unwrap();
            let (r, col) = (rng.gen_range(0..mat.rows()), rng.gen_range(0..mat.cols()));
            let coeff = [-2, -1, 1, 2][rng.gen_range(0..4)];
            let delta = LaurentPoly::monomial(rng.gen_range(-2..=2), rat(coeff));
            let x = mat.get(r, col).clone() + delta;
            mat.set(r, col, x);
            let rep = certify(&d, &bad).map_err(|e| e.to_string())?;
            ensure(!rep.all_passed(), || format!("{name}: perturbation {t} of {key:?} went unnoticed"))?;
            perturbations += 1;
        }
    }
    Ok(format!("4 modules certified, {perturbations} perturbations rejected"))
}

fn cyclotomic_tables() -> Outcome {
    let d = RootDatum::type_a(1);
    let lam = Weight(vec![2]);
    let m = build_module(&d, &lam, 4).map_err(|e| e.to_string())?;
    let mut c = candidate_from_module(&d, &m).map_err(|e| e.to_string())?;
    let mut dims = Vec::new();
    for k in 1..=2 {
        let q = cyclotomic_quotient(&d, &lam, &[k], 12).map_err(|e| e.to_string())?;
        let oracle = cyclotomic_dimension_oracle(&d, &lam, &[k]).map_err(|e| e.to_string())?;
        ensure(rat(q.dimension() as i64) == oracle, || format!("nu={k}: {} vs oracle {oracle}", q.dimension()))?;
        dims.push(q.dimension());
        c.tables.push((format!("nu{k}"), q.operator_tables(&Rewriter::new(&d)).map_err(|e| e.to_string())?));
    }
    ensure(dims[0] == 2, || format!("dimension for nu=alpha is {}", dims[0]))?;
    let rep = certify(&d, &c).map_err(|e| e.to_string())?;
    ensure(rep.passed(4), || format!("{rep}"))?;
    Ok(format!("dimensions {dims:?} match the oracle, tables pass"))
}

fn uq_cases() -> Vec<(&'static str, RootDatum, Vec<i64>)> {
    vec![
        ("sl2 0", RootDatum::type_a(1), vec![0]),
        ("sl2 1", RootDatum::type_a(1), vec![1]),
        ("sl2 2", RootDatum::type_a(1), vec![2]),
        ("sl2 3", RootDatum::type_a(1), vec![3]),
        ("A2 omega1", RootDatum::type_a(2), vec![1, 0]),
        ("A2 omega1+omega2", RootDatum::type_a(2), vec![1, 1]),
    ]
}

fn decategorified_relations() -> Outcome {
    let mut checks = 0;
    for (name, d, lam) in uq_cases() {
        let trivial = lam.iter().all(|&x| x == 0);
        let m = build_module(&d, &Weight(lam), 4).map_err(|e| e.to_string())?;
        let rep = verify_uq_relations(&d, &m);
        ensure(rep.passed(), || format!("{name}: {rep}"))?;
        for fam in ["(i)", "(ii)", "(iii)", "(iv)", "(v)", "q=1"] {
            ensure(rep.passed_family(fam), || format!("{name}: family {fam}"))?;
            checks += rep.count(fam);
        }
        ensure(trivial || rep.count("q=1") > 0, || format!("{name}: no q=1 checks"))?;
    }
    Ok(format!("{checks} relation checks across {} modules", uq_cases().len()))
}

fn weight_geometry() -> Outcome {
    let mut spaces = 0;
    for (name, d, lam) in uq_cases() {
        let lam = Weight(lam);
        let m = build_module(&d, &lam, 4).map_err(|e| e.to_string())?;
        for sp in m.spaces() {
            let f = freudenthal_multiplicity(&d, &lam, &sp.weight).map_err(|e| e.to_string())?;
            ensure(f == sp.dim() as i64, || format!("{name} at {:?}: Freudenthal {f}, quotient {}", sp.weight, sp.dim()))?;
            spaces += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for t in 0..100 {
        let rank = rng.gen_range(1..=3);
        let d = RootDatum::type_a(rank);
        let lam = Weight((0..rank).map(|_| rng.gen_range(0..=3)).collect());
        let v: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..=4)).collect();
        let i = rng.gen_range(0..rank);
        let s = string_finiteness(&d, &lam, &v, i, 3).map_err(|e| e.to_string())?;
        ensure(s.finite, || format!("triple {t}: {lam:?} {v:?} i={i} gives {s:?}"))?;
    }
    let p = period_class(&RootDatum::type_a(1), &Weight(vec![2]), &[1]).map_err(|e| e.to_string())?;
    ensure(p.coeffs == vec![rat(1)] && p.integral, || format!("sl2 period {p:?}"))?;
    let p = period_class(&RootDatum::type_a(2), &Weight(vec![1, 0]), &[1, 1]).map_err(|e| e.to_string())?;
    ensure(p.coeffs == vec![rat(0), ratio(1, 2)] && !p.integral, || format!("A2 period {p:?}"))?;
    Ok(format!("{spaces} weight spaces agree, 100 strings finite, period examples reproduced"))
}

fn twist_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut integral = 0;
    for t in 0..100 {
        let n = rng.gen_range(1..=4);
        // small denominators so that both outcomes occur
        let draw = |rng: &mut ChaCha8Rng| ratio(rng.gen_range(-6..=6), [1, 1, 2, 3][rng.gen_range(0..4)]);
        let a: Vec<Rational> = (0..n).map(|_| draw(&mut rng)).collect();
        let shift: Vec<Rational> = (0..n).map(|_| if rng.gen_bool(0.7) { rat(rng.gen_range(-2..=2)) } else { draw(&mut rng) }).collect();
        let b: Vec<Rational> = a.iter().zip(&shift).map(|(x, s)| x - s).collect();
        let i = rng.gen_range(0..n);
        let fast = twist_integrality(&a, &b, i);
        let brute = twist_class_coordinates(&a, &b, i).iter().all(Rational::is_integer);
        ensure(fast == brute, || format!("input {t}: criterion {fast}, class coordinates {brute}"))?;
        integral += fast as usize;
    }
    Ok(format!("100 inputs agree ({integral} integral)"))
}

fn golden_determinism() -> Outcome {
    for (name, args) in common::CASES {
        let first = common::run_case(args);
        let second = common::run_case(args);
        ensure(first == second, || format!("{name} differs between runs"))?;
        let stored = fs::read_to_string(common::expected_path(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure(first == stored, || format!("{name} differs from its stored transcript"))?;
    }
    Ok(format!("{} runs byte-identical", common::CASES.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("KLR relation suite", relation_suite),
        ("oracle equivalence", oracle_equivalence),
        ("bubble inversion", bubble_inversion),
        ("certifier ground truth", certifier_ground_truth),
        ("cyclotomic tables", cyclotomic_tables),
        ("decategorified relations", decategorified_relations),
        ("weight and geometry consistency", weight_geometry),
        ("twist integrality", twist_criterion),
        ("golden determinism", golden_determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {} FAIL {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
