use qsasaki::cohomology::{
    induced_h_star, invariant_dimension, invariant_dimension_by_averaging, poincare_polynomial, quotient_betti,
    sphere_action_on_cohomology, IntPolynomial, RationalMatrix,
};
use qsasaki::obstruction::{four_dimensional_hyperkahler, nonproduct_obstruction, obstruction_for, Verdict};

#[test]
fn betti_numbers_for_small_cases() {
    let cases: [((usize, usize), &[usize]); 4] = [
        ((1, 1), &[1, 0, 4, 0, 1, 0, 0, 1, 0, 4, 0, 1]),
        ((1, 2), &[1, 0, 16, 0, 38, 0, 16, 1, 1, 16, 0, 38, 0, 16, 0, 1]),
        ((0, 1), &[1, 0, 4, 1, 1, 4, 0, 1]),
        ((2, 1), &[1, 0, 4, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 4, 0, 1]),
    ];
    for ((l, m), expected) in cases {
        let b = quotient_betti(l, m).unwrap().betti;
        assert_eq!(b, expected, "(l, m) = ({l}, {m})");
        let n = b.len() - 1;
        assert!((0..=n).all(|k| b[k] == b[n - k]), "Poincaré duality");
    }
}

#[test]
fn both_invariant_routes_agree_on_two_blocks() {
    let a = induced_h_star(2).unwrap();
    let one = induced_h_star(1).unwrap();
    assert_eq!(a, one.direct_sum(&one));
    for k in 0..=8 {
        assert_eq!(
            invariant_dimension(&a, k).unwrap(),
            invariant_dimension_by_averaging(&a, k, 1).unwrap()
        );
    }
}

#[test]
fn sphere_top_class_is_fixed() {
    for l in 0..4 {
        for power in 1..4 {
            let s = sphere_action_on_cohomology(l, power).unwrap();
            assert_eq!((s.on_h0, s.on_top), (1, 1));
        }
    }
}

#[test]
fn infinite_order_matrices_are_rejected() {
    let shear = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
    assert!(invariant_dimension(&shear, 1).is_err());
}

#[test]
fn full_pipeline_rules_out_a_product() {
    let p = poincare_polynomial(1, 1).unwrap();
    assert_eq!(p, IntPolynomial::new(vec![1, 0, 4, 0, 1, 0, 0, 1, 0, 4, 0, 1]));
    let v = nonproduct_obstruction(&p, 7, &four_dimensional_hyperkahler()).unwrap();
    assert_eq!(v.verdict, Verdict::NotProduct);
    assert_eq!(v, obstruction_for(1, 1).unwrap());
}

#[test]
fn equality_case_is_inconclusive() {
    let k3 = IntPolynomial::new(vec![1, 0, 22, 0, 1]);
    let p = &IntPolynomial::one_plus_t_pow(7) * &k3;
    let cands = vec![qsasaki::obstruction::CandidateFactor::k3()];
    assert_eq!(
        nonproduct_obstruction(&p, 7, &cands).unwrap().verdict,
        Verdict::Inconclusive
    );
    assert!(nonproduct_obstruction(&IntPolynomial::zero(), 7, &cands).is_err());
    assert!(nonproduct_obstruction(&p, 7, &[]).is_err());
}
