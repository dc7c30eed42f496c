use klr_core::algebra::rat;
use klr_core::klr::cyclotomic::{cyclotomic_quotient, sl2_graded_dim};
use klr_core::rootdata::{RootDatum, Weight};
use klr_core::uqrep::{build_module, cyclotomic_dimension_oracle, freudenthal_multiplicity, verify_uq_relations};

#[test]
fn cyclotomic_dimensions_agree_with_shapovalov_oracle() {
    let d = RootDatum::type_a(1);
    for m in 0..4 {
        for k in 0..=m + 1 {
            let q = cyclotomic_quotient(&d, &Weight(vec![m]), &[k], 12).unwrap();
            assert!(q.stabilized());
            assert_eq!(q.graded_dim, sl2_graded_dim(m, k));
            assert_eq!(rat(q.dimension() as i64), cyclotomic_dimension_oracle(&d, &Weight(vec![m]), &[k]).unwrap());
        }
    }
}

#[test]
fn a3_module_matches_freudenthal_and_relations() {
    let d = RootDatum::type_a(3);
    let lam = Weight(vec![0, 1, 0]);
    let m = build_module(&d, &lam, 6).unwrap();
    assert!(m.complete);
    assert_eq!(m.spaces().map(|s| s.dim()).sum::<usize>(), 6);
    for sp in m.spaces() {
        assert_eq!(sp.dim() as i64, freudenthal_multiplicity(&d, &lam, &sp.weight).unwrap());
    }
    let rep = verify_uq_relations(&d, &m);
    assert!(rep.passed(), "{rep}");
}
