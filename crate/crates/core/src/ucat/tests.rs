use super::*;
use crate::algebra::{rat, LaurentPoly, Matrix, Rational};
use crate::klr::cyclotomic::cyclotomic_quotient;
use crate::klr::rewrite::Rewriter;
use crate::rootdata::{RootDatum, Weight};
use crate::uqrep::build_module;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn sl2() -> RootDatum {
    RootDatum::type_a(1)
}

fn deg(d: &RootDatum, src: &str) -> i64 {
    parse_diagram(d, src).unwrap().degree(d).unwrap()
}

#[test]
fn generator_degrees() {
    let d = sl2();
    assert_eq!(deg(&d, "E1 @ 0 ; dot 1"), 2);
    assert_eq!(deg(&d, "F1 @ 5 ; dot 1"), 2);
    assert_eq!(deg(&d, "E1 E1 @ 0 ; cross 1"), -2);
    assert_eq!(deg(&d, "F1 F1 @ 0 ; cross 1"), -2);
    // A cap whose inner region has weight 2.
    assert_eq!(deg(&d, "E1 F1 @ 4 ; cap eps 1"), -3);
    let a2 = RootDatum::type_a(2);
    assert_eq!(deg(&a2, "E1 E2 @ 0 0 ; cross 1"), 1);
    assert_eq!(deg(&a2, "E1 F2 @ 0 0 ; cross 1"), 0);
}

#[test]
fn zigzags_have_degree_zero() {
    let d = sl2();
    for l in -4..=4 {
        for src in [
            format!("E1 @ {l} ; cup iota 2 1 ; cap eps 1"),
            format!("E1 @ {l} ; cup iota' 1 1 ; cap eps' 2"),
            format!("F1 @ {l} ; cup iota' 2 1 ; cap eps' 1"),
            format!("F1 @ {l} ; cup iota 1 1 ; cap eps 2"),
        ] {
            let dg = parse_diagram(&d, &src).unwrap();
            let (ifaces, total) = dg.check(&d).unwrap();
            assert_eq!(total, 0, "{src}");
            assert_eq!(ifaces.last().unwrap(), &dg.bottom, "{src}");
        }
    }
}

#[test]
fn sequentialize_preserves_degree_and_top() {
    let d = RootDatum::type_a(2);
    let dg = parse_diagram(&d, "E1 F1 E2 E2 @ 1 2 ; dot 1, cross 3 ; cup iota 1 2, cap eps 1, dot 4").unwrap();
    let (deg, top) = (dg.degree(&d).unwrap(), dg.top(&d).unwrap());
    for left in [true, false] {
        let s = dg.sequentialize(left);
        assert!(s.layers.iter().all(|l| l.gens.len() == 1));
        assert_eq!(s.degree(&d).unwrap(), deg);
        assert_eq!(s.top(&d).unwrap(), top);
    }
}

#[test]
fn diagram_errors() {
    let d = sl2();
    assert!(matches!(parse_diagram(&d, "E1 E1 @ 0 ; cap eps 1").unwrap().check(&d), Err(DiagramError::BadInterface { .. })));
    assert!(matches!(parse_diagram(&d, "E1 @ 0 ; dot 2").unwrap().check(&d), Err(DiagramError::BadInterface { .. })));
    assert!(matches!(parse_diagram(&d, "E3 @ 0"), Err(DiagramError::Parse { .. })));
    assert!(matches!(parse_diagram(&d, "E1 @ 0 0"), Err(DiagramError::Parse { .. })));
    assert!(matches!(parse_diagram(&d, "E1 ; dot 1"), Err(DiagramError::Parse { .. })));
    assert!(matches!(parse_diagram(&d, "E1 @ 0 ; twist 1"), Err(DiagramError::Parse { .. })));
}

#[test]
fn region_weights() {
    let d = sl2();
    let w = OneMorWord { symbols: vec![Strand::e(0), Strand::f(0), Strand::f(0)], domain: Weight(vec![3]) };
    let r: Vec<i64> = w.regions(&d).iter().map(|x| x.0[0]).collect();
    assert_eq!(r, vec![1, -1, 1, 3]);
    assert_eq!(w.codomain(&d), Weight(vec![1]));
    assert_eq!(word_string(&d, &w.symbols), "E1 F1 F1");
}

fn real(cw: &[(i64, i64)], ccw: &[(i64, i64)]) -> RealBubbles {
    RealBubbles {
        cw: cw.iter().map(|&(k, v)| (k, rat(v))).collect(),
        ccw: ccw.iter().map(|&(k, v)| (k, rat(v))).collect(),
    }
}

#[test]
fn fake_bubbles_from_zero_real_bubbles() {
    let d = sl2();
    // All positive-degree real bubbles vanish, so the fake ones do too.
    let p = solve_fake_bubbles(&d, 0, &Weight(vec![2]), &real(&[(2, 0), (3, 0)], &[]), 4).unwrap();
    assert!(p.inversion_holds());
    assert_eq!(p.ccw.value(-3), rat(1));
    assert_eq!(p.ccw.value(-2), rat(0));
    assert_eq!(p.cw.at_degree(0), rat(1));
}

#[test]
fn fake_bubbles_solve_the_inverse_series() {
    let d = sl2();
    let p = solve_fake_bubbles(&d, 0, &Weight(vec![0]), &real(&[(0, 2), (1, 3)], &[]), 4).unwrap();
    // 1 + 2t + 3t^2 inverts to 1 - 2t + t^2.
    assert_eq!(p.ccw.at_degree(1), rat(-2));
    assert_eq!(p.ccw.at_degree(2), rat(1));
    assert!(p.inversion_holds());
    // Negative weight: the counterclockwise side is free.
    let p = solve_fake_bubbles(&d, 0, &Weight(vec![-2]), &real(&[], &[(2, 5)]), 2).unwrap();
    assert_eq!(p.cw.value(-2), rat(-5));
}

#[test]
fn bubble_solver_errors() {
    let d = sl2();
    let w = Weight(vec![1]);
    assert!(matches!(solve_fake_bubbles(&d, 0, &w, &real(&[], &[]), 2), Err(BubbleError::Missing { .. })));
    assert!(matches!(solve_fake_bubbles(&d, 0, &w, &real(&[(0, 2)], &[]), 0), Err(BubbleError::DegreeZero { .. })));
    assert!(matches!(solve_fake_bubbles(&d, 0, &Weight(vec![3]), &real(&[(1, 4)], &[]), 0), Err(BubbleError::NegativeDegree { .. })));
    assert!(matches!(
        solve_fake_bubbles(&d, 0, &Weight(vec![0]), &real(&[(0, 1)], &[(0, 7)]), 2),
        Err(BubbleError::Inconsistent { .. })
    ));
    assert!(matches!(solve_fake_bubbles(&d, 3, &w, &real(&[], &[]), 0), Err(BubbleError::Vertex(3))));
}

fn sl2_fundamental() -> CandidateAction {
    let one = || Matrix::from_rows(vec![vec![LaurentPoly::one()]], 1);
    let mut c = CandidateAction::empty();
    for (name, l) in [("top", 1), ("bottom", -1)] {
        c.weights.push(WeightEntry { name: name.into(), weight: Weight(vec![l]), dim: 1, end_dims: Some(vec![LaurentPoly::one()]) });
    }
    c.e.insert((0, 1), one());
    c.f.insert((0, 0), one());
    c
}

#[test]
fn toy_action_passes() {
    let d = sl2();
    let rep = certify(&d, &sl2_fundamental()).unwrap();
    assert!(rep.all_passed(), "{rep}");
    assert_eq!(rep.condition(3).status(), Status::Pass);
    assert_eq!(rep.summands.len(), 2);
    assert_eq!(rep.summands[0].pairing, 1);
}

#[test]
fn doubled_entry_breaks_the_commutator() {
    let d = sl2();
    let mut c = sl2_fundamental();
    c.e.insert((0, 1), Matrix::from_rows(vec![vec![LaurentPoly::constant(rat(2))]], 1));
    let rep = certify(&d, &c).unwrap();
    assert!(!rep.passed(3));
    assert!(rep.passed(1) && rep.passed(2) && rep.passed(5));
    assert!(rep.condition(3).first_failure().unwrap().witness.as_ref().unwrap().contains("entry (1,1)"));
}

#[test]
fn negative_coefficient_breaks_positivity() {
    let d = sl2();
    let mut c = sl2_fundamental();
    c.weights[0].end_dims = Some(vec![LaurentPoly::parse("1 - q^2").unwrap()]);
    let rep = certify(&d, &c).unwrap();
    assert!(!rep.passed(2));
}

#[test]
fn missing_weight_breaks_integrability() {
    let d = sl2();
    let mut c = sl2_fundamental();
    c.weights.push(WeightEntry { name: "extra".into(), weight: Weight(vec![-3]), dim: 1, end_dims: None });
    let rep = certify(&d, &c).unwrap();
    assert!(!rep.passed(1));
}

#[test]
fn ground_truth_modules_certify() {
    let cases: Vec<(RootDatum, Vec<i64>)> = vec![
        (sl2(), vec![1]),
        (sl2(), vec![2]),
        (sl2(), vec![3]),
        (RootDatum::type_a(2), vec![1, 0]),
        (RootDatum::type_a(2), vec![1, 1]),
    ];
    for (d, lam) in cases {
        let m = build_module(&d, &Weight(lam.clone()), 8).unwrap();
        let c = candidate_from_module(&d, &m).unwrap();
        let rep = certify(&d, &c).unwrap();
        assert!(rep.all_passed(), "{lam:?}\n{rep}");
        if d.rank() == 1 {
            assert_eq!(rep.condition(2).status(), Status::Pass);
        }
    }
}

#[test]
fn truncated_module_is_rejected() {
    let d = RootDatum::affine_a1();
    let m = build_module(&d, &Weight(vec![1, 0]), 2).unwrap();
    assert_eq!(candidate_from_module(&d, &m).unwrap_err(), GroundTruthError::Truncated);
}

#[test]
fn perturbed_ground_truth_fails() {
    let d = RootDatum::type_a(2);
    let m = build_module(&d, &Weight(vec![1, 1]), 8).unwrap();
    let c = candidate_from_module(&d, &m).unwrap();
    let key = *c.f.keys().next().unwrap();
    let mut bad = c.clone();
    let mat = bad.f.get_mut(&key).unwrap();
    let x = mat.get(0, 0).clone() + LaurentPoly::one();
    mat.set(0, 0, x);
    let rep = certify(&d, &bad).unwrap();
    assert!(!rep.all_passed());
}

fn sl2_tables() -> crate::klr::cyclotomic::OperatorTables {
    let d = sl2();
    let q = cyclotomic_quotient(&d, &Weight(vec![2]), &[2], 10).unwrap();
    q.operator_tables(&Rewriter::new(&d)).unwrap()
}

#[test]
fn cyclotomic_tables_satisfy_the_klr_condition() {
    let d = sl2();
    let mut c = sl2_fundamental();
    c.tables.push(("r22".into(), sl2_tables()));
    let rep = certify(&d, &c).unwrap();
    assert_eq!(rep.condition(4).status(), Status::Pass, "{rep}");
    assert!(rep.condition(4).items.iter().any(|i| i.status == Status::NotChecked));

    let mut t = sl2_tables();
    t.dots[0] = t.dots[0].scale(&rat(2));
    c.tables[0].1 = t;
    assert!(!certify(&d, &c).unwrap().passed(4));
}

#[test]
fn broken_bubbles_fail_inversion() {
    let d = sl2();
    let mut c = sl2_fundamental();
    let mut p = solve_fake_bubbles(&d, 0, &Weight(vec![1]), &real(&[(1, 1), (2, 0)], &[]), 4).unwrap();
    c.bubbles.push(p.clone());
    assert!(certify(&d, &c).unwrap().passed(4));
    p.ccw.values.insert(0, rat(9));
    c.bubbles[0] = p;
    assert!(!certify(&d, &c).unwrap().passed(4));
}

#[test]
fn fixture_round_trip() {
    let d = sl2();
    let mut c = candidate_from_module(&d, &build_module(&d, &Weight(vec![2]), 4).unwrap()).unwrap();
    c.tables.push(("r22".into(), sl2_tables()));
    c.bubbles.push(solve_fake_bubbles(&d, 0, &Weight(vec![0]), &real(&[(0, 1), (1, -2)], &[]), 4).unwrap());
    let text = c.to_text(&d);
    let back = CandidateAction::parse(&d, &text).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.to_text(&d), text);
}

#[test]
fn fixture_errors_carry_line_numbers() {
    let d = sl2();
    let err = CandidateAction::parse(&d, "candidate-action\nweight a coords 1 dim 1\nE 1 a 1x1\n  1 | 2\n").unwrap_err();
    assert!(matches!(err, ActionError::Parse { line: 4, .. }), "{err}");
    let err = CandidateAction::parse(&d, "nonsense\n").unwrap_err();
    assert!(matches!(err, ActionError::Parse { line: 1, .. }), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solved_bubbles_invert(l in -4i64..5, vals in prop::collection::vec(-3i64..4, 4)) {
        let d = sl2();
        let z = degree_zero_dots(if l >= 0 { Rotation::Clockwise } else { Rotation::Counterclockwise }, l);
        let free: BTreeMap<i64, Rational> = vals.iter().enumerate().map(|(p, &v)| (z + 1 + p as i64, rat(v))).collect();
        let r = if l >= 0 { RealBubbles { cw: free, ccw: BTreeMap::new() } } else { RealBubbles { cw: BTreeMap::new(), ccw: free } };
        let p = solve_fake_bubbles(&d, 0, &Weight(vec![l]), &r, 8).unwrap();
        prop_assert!(p.inversion_holds());
    }

    #[test]
    fn sideways_crossings_have_degree_zero(l in -4i64..5, m in -4i64..5) {
        let d = RootDatum::type_a(2);
        for src in [format!("E1 F2 @ {l} {m} ; cross 1"), format!("F1 E1 @ {l} {m} ; cross 1")] {
            prop_assert_eq!(deg(&d, &src), 0);
        }
    }
}
