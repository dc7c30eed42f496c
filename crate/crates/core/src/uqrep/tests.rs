use super::*;
use crate::algebra::{LaurentPoly, RatFunc};
use proptest::prelude::*;

fn sl2() -> RootDatum {
    RootDatum::type_a(1)
}

fn w(c: &[i64]) -> Weight {
    Weight(c.to_vec())
}

#[test]
fn sl2_string_multiplicities() {
    let d = sl2();
    for n in 0..5 {
        for m in -7..=7 {
            let got = freudenthal_multiplicity(&d, &w(&[n]), &w(&[m])).unwrap();
            let want = i64::from(m.abs() <= n && (n - m) % 2 == 0);
            assert_eq!(got, want, "n={n} m={m}");
        }
    }
}

#[test]
fn a2_adjoint_zero_weight() {
    let d = RootDatum::type_a(2);
    assert_eq!(freudenthal_multiplicity(&d, &w(&[1, 1]), &w(&[0, 0])).unwrap(), 2);
    assert_eq!(freudenthal_multiplicity(&d, &w(&[1, 1]), &w(&[2, -1])).unwrap(), 1);
    // lambda - mu = alpha_1 / 2 is not in the root lattice
    assert_eq!(freudenthal_multiplicity(&d, &w(&[1, 1]), &w(&[0, 1])).unwrap(), 0);
}

#[test]
fn known_dimensions() {
    // dim V(lambda) summed over all weights: A2 adjoint 8, A3 V(w2) 6, A2 V(2,0) 6.
    for (d, lam, dim) in [
        (RootDatum::type_a(2), vec![1, 1], 8),
        (RootDatum::type_a(3), vec![0, 1, 0], 6),
        (RootDatum::type_a(2), vec![2, 0], 6),
        (RootDatum::type_a(2), vec![2, 1], 15),
    ] {
        let mut wm = WeightMultiplicities::new(&d, &w(&lam)).unwrap();
        let mut total = 0;
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..if d.rank() == 3 { 6 } else { 1 } {
                    let beta: Vec<i64> = [a, b, c][..d.rank()].to_vec();
                    total += wm.at_depth(&beta);
                }
            }
        }
        assert_eq!(total, dim, "{lam:?}");
    }
}

#[test]
fn affine_root_multiplicities() {
    let d = RootDatum::affine_a1();
    let mut r = RootMultiplicities::new(&d);
    // delta = a0 + a1 has multiplicity 1; 2 delta too; 2 a0 is not a root.
    assert_eq!(r.mult(&[1, 1]), 1);
    assert_eq!(r.mult(&[2, 2]), 1);
    assert_eq!(r.mult(&[2, 1]), 1);
    assert_eq!(r.mult(&[2, 0]), 0);
    assert_eq!(r.mult(&[3, 1]), 0);
}

#[test]
fn affine_basic_module_depths() {
    // Basic representation of affine sl2: weight multiplicities along -k delta are
    // partition numbers p(k).
    let d = RootDatum::affine_a1();
    let mut wm = WeightMultiplicities::new(&d, &w(&[1, 0])).unwrap();
    let p = [1, 1, 2, 3, 5];
    for (k, &pk) in p.iter().enumerate() {
        let k = k as i64;
        assert_eq!(wm.at_depth(&[k, k]), pk, "k={k}");
    }
}

#[test]
fn degenerate_cartan_is_reported() {
    let d = RootDatum::affine_a1();
    assert_eq!(freudenthal_multiplicity(&d, &w(&[1, 0]), &w(&[1, 0])), Err(UqError::DegenerateCartan));
}

#[test]
fn build_sl2_modules() {
    let d = sl2();
    let m = build_module(&d, &w(&[1]), 4).unwrap();
    assert!(m.complete);
    assert_eq!((m.dim_at(&[0]), m.dim_at(&[1]), m.dim_at(&[2])), (1, 1, 0));
    // E F v_+ = [1] v_+ = v_+
    let ef = m.op(true, 0, &[1]).unwrap().mul(&m.op(false, 0, &[0]).unwrap());
    assert_eq!(ef.get(0, 0), &RatFunc::from_laurent(LaurentPoly::one()));

    let m2 = build_module(&d, &w(&[2]), 3).unwrap();
    assert_eq!((m2.dim_at(&[0]), m2.dim_at(&[1]), m2.dim_at(&[2]), m2.dim_at(&[3])), (1, 1, 1, 0));

    let m0 = build_module(&d, &w(&[3]), 0).unwrap();
    assert_eq!(m0.spaces().count(), 1);
    assert!(!m0.complete);
}

#[test]
fn sl2_top_commutator() {
    let d = sl2();
    let m = build_module(&d, &w(&[2]), 3).unwrap();
    let ef = m.op(true, 0, &[1]).unwrap().mul(&m.op(false, 0, &[0]).unwrap());
    assert_eq!(ef.get(0, 0).to_string(), "q + q^-1");
    let rep = verify_uq_relations(&d, &m);
    assert!(rep.passed(), "{rep}");
}

#[test]
fn relations_hold_on_small_modules() {
    let cases: Vec<(RootDatum, Vec<i64>)> = vec![
        (sl2(), vec![1]),
        (sl2(), vec![3]),
        (RootDatum::type_a(2), vec![1, 0]),
        (RootDatum::type_a(2), vec![1, 1]),
    ];
    for (d, lam) in cases {
        let m = build_module(&d, &w(&lam), 4).unwrap();
        let rep = verify_uq_relations(&d, &m);
        assert!(rep.passed(), "{lam:?}\n{rep}");
        for fam in FAMILIES.iter().filter(|&&f| d.rank() > 1 || f != "(v)") {
            assert!(rep.count(fam) > 0, "{fam} never exercised for {lam:?}");
        }
        let mut wm = WeightMultiplicities::new(&d, &w(&lam)).unwrap();
        for sp in m.spaces() {
            assert_eq!(sp.dim() as i64, wm.at_depth(&sp.beta));
            assert_eq!(sp.gram.rows(), sp.dim());
            assert_eq!(sp.gram.rank(), sp.dim(), "degenerate Shapovalov form");
            assert_eq!(sp.gram, sp.gram.transpose());
        }
    }
}

#[test]
fn affine_module_is_truncated() {
    let d = RootDatum::affine_a1();
    let m = build_module(&d, &w(&[1, 0]), 4).unwrap();
    assert!(!m.complete);
    let rep = verify_uq_relations(&d, &m);
    assert!(rep.truncated);
    assert!(rep.passed(), "{rep}");
    let mut wm = WeightMultiplicities::new(&d, &w(&[1, 0])).unwrap();
    for sp in m.spaces() {
        assert_eq!(sp.dim() as i64, wm.at_depth(&sp.beta));
    }
}

#[test]
fn nonemptiness_examples() {
    let d = sl2();
    assert!(nakajima_nonempty(&d, &w(&[2]), &[0]).unwrap());
    assert!(nakajima_nonempty(&d, &w(&[2]), &[1]).unwrap());
    assert!(!nakajima_nonempty(&d, &w(&[1]), &[2]).unwrap());
}

#[test]
fn quiver_dims_examples() {
    let d = sl2();
    let q = quiver_space_dims(&d, &w(&[2]), &[1]).unwrap();
    assert_eq!((q.dim_e, q.dim_g, q.expected_dim), (2, 1, 2));
    let a2 = RootDatum::type_a(2);
    let q = quiver_space_dims(&a2, &w(&[1, 0]), &[1, 1]).unwrap();
    assert_eq!((q.dim_e, q.dim_g, q.expected_dim), (2, 2, 0));
    let q = quiver_space_dims(&a2, &w(&[1, 0]), &[0, 0]).unwrap();
    assert_eq!((q.dim_e, q.dim_g, q.expected_dim), (0, 0, 0));
}

#[test]
fn period_examples() {
    let p = period_class(&sl2(), &w(&[2]), &[1]).unwrap();
    assert_eq!(p.coeffs, vec![rat(1)]);
    assert!(p.integral);
    let p = period_class(&RootDatum::type_a(2), &w(&[1, 0]), &[1, 1]).unwrap();
    assert_eq!(p.coeffs, vec![rat(0), ratio(1, 2)]);
    assert!(!p.integral && p.orientation_independent);
    let p = period_class(&RootDatum::type_a(2), &w(&[0, 0]), &[0, 0]).unwrap();
    assert_eq!(p.coeffs, vec![rat(0), rat(0)]);
}

#[test]
fn twist_examples() {
    let z = vec![rat(0); 3];
    assert!(twist_integrality(&z, &z, 0));
    let mut a = z.clone();
    a[0] = ratio(1, 2);
    assert!(!twist_integrality(&a, &z, 0));
    let third = vec![rat(0), ratio(1, 3), ratio(1, 3)];
    assert!(twist_integrality(&third, &third, 0));
}

#[test]
fn string_finiteness_sl2() {
    let s = string_finiteness(&sl2(), &w(&[2]), &[1], 0, 3).unwrap();
    assert_eq!(s.nonempty, vec![-1, 0, 1]);
    assert!(s.finite);
}

#[test]
fn cyclotomic_oracle_matches_quotient() {
    use crate::klr::cyclotomic::cyclotomic_quotient;
    let cases: Vec<(RootDatum, Vec<i64>, Vec<i64>)> = vec![
        (sl2(), vec![2], vec![1]),
        (sl2(), vec![2], vec![2]),
        (sl2(), vec![3], vec![2]),
        (RootDatum::type_a(2), vec![1, 0], vec![1, 1]),
        (RootDatum::type_a(2), vec![1, 1], vec![1, 1]),
    ];
    for (d, lam, nu) in cases {
        let q = cyclotomic_quotient(&d, &w(&lam), &nu, 12).unwrap();
        let oracle = cyclotomic_dimension_oracle(&d, &w(&lam), &nu).unwrap();
        assert_eq!(rat(q.dimension() as i64), oracle, "{lam:?} {nu:?}");
    }
    assert_eq!(cyclotomic_dimension_oracle(&sl2(), &w(&[2]), &[1]).unwrap(), rat(2));
    assert_eq!(cyclotomic_dimension_oracle(&sl2(), &w(&[1]), &[2]).unwrap(), rat(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weyl_symmetry_a2(l1 in 0i64..3, l2 in 0i64..3, b1 in 0i64..5, b2 in 0i64..5, i in 0usize..2) {
        let d = RootDatum::type_a(2);
        let lam = w(&[l1, l2]);
        let mu = lam.sub(&d.root_to_weight(&[b1, b2]));
        let reflected = mu.sub(&d.simple_root(i).scale(mu.0[i]));
        let a = freudenthal_multiplicity(&d, &lam, &mu).unwrap();
        let b = freudenthal_multiplicity(&d, &lam, &reflected).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dimvec_round_trip(l1 in 0i64..4, l2 in 0i64..4, v1 in 0i64..4, v2 in 0i64..4) {
        let d = RootDatum::type_a(2);
        let lam = w(&[l1, l2]);
        let mu = d.mu_from_dimvec(&lam, &[v1, v2]).unwrap();
        prop_assert_eq!(crate::uqrep::depth_of(&d, &lam, &mu).unwrap(), Some(vec![v1, v2]));
    }

    #[test]
    fn twist_matches_class_coordinates(
        a in prop::collection::vec((-6i64..6, 1i64..4), 3),
        b in prop::collection::vec((-6i64..6, 1i64..4), 3),
        i in 0usize..3,
    ) {
        let a: Vec<Rational> = a.into_iter().map(|(n, d)| ratio(n, d)).collect();
        let b: Vec<Rational> = b.into_iter().map(|(n, d)| ratio(n, d)).collect();
        let brute = twist_class_coordinates(&a, &b, i).iter().all(is_integer);
        prop_assert_eq!(twist_integrality(&a, &b, i), brute);
    }
}
