use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qsasaki::cohomology::{exterior_power, induced_h_star, invariant_dimension, IntPolynomial, RationalMatrix};
use qsasaki::obstruction::{nonproduct_obstruction, poly_leq, poly_lt, poly_mul, CandidateFactor, Verdict};
use qsasaki::quatlin::Quaternion;

fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec(rational(), rows * cols)
        .prop_map(move |v| RationalMatrix::from_fn(rows, cols, |r, c| v[r * cols + c].clone()))
}

fn square_pair() -> impl Strategy<Value = (RationalMatrix, RationalMatrix, usize)> {
    (1usize..=4).prop_flat_map(|n| (matrix(n, n), matrix(n, n), 0..=n))
}

fn poly() -> impl Strategy<Value = IntPolynomial> {
    proptest::collection::vec(0u64..4, 0..7).prop_map(IntPolynomial::new)
}

fn nonzero_poly() -> impl Strategy<Value = IntPolynomial> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exterior_power_is_functorial((m, n, k) in square_pair()) {
        let lhs = exterior_power(&(&m * &n), k).unwrap();
        let rhs = &exterior_power(&m, k).unwrap() * &exterior_power(&n, k).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn invariant_dimension_is_basis_independent(s in matrix(4, 4), k in 0usize..=4) {
        prop_assume!(s.rank() == 4);
        let a = induced_h_star(1).unwrap();
        let conj = &(&s * &a) * &s.inverse().unwrap();
        prop_assert_eq!(invariant_dimension(&conj, k).unwrap(), invariant_dimension(&a, k).unwrap());
    }

    #[test]
    fn bareiss_rank_matches_rref((rows, cols) in (1usize..=5, 1usize..=5), seed in matrix(5, 5), low in matrix(5, 2)) {
        let full = RationalMatrix::from_fn(rows, cols, |r, c| seed.get(r, c).clone());
        prop_assert_eq!(full.rank(), full.rref().1.len());
        // rank at most 2 by construction
        let thin = &low * &RationalMatrix::from_fn(2, cols, |r, c| seed.get(r, c).clone());
        prop_assert!(thin.rank() <= 2);
        prop_assert_eq!(thin.rank(), thin.rref().1.len());
        prop_assert_eq!(thin.rank() + thin.nullity(), cols);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn poly_leq_is_a_partial_order(p in poly(), q in poly(), r in poly()) {
        prop_assert!(poly_leq(&p, &p));
        prop_assert!(!poly_lt(&p, &p));
        if poly_leq(&p, &q) && poly_leq(&q, &p) {
            prop_assert_eq!(&p, &q);
        }
        if poly_leq(&p, &q) && poly_leq(&q, &r) {
            prop_assert!(poly_leq(&p, &r));
        }
        prop_assert_eq!(poly_lt(&p, &q), poly_leq(&p, &q) && p != q);
    }

    #[test]
    fn multiplication_is_monotone(p1 in poly(), extra in nonzero_poly(), p in nonzero_poly()) {
        let p2 = &p1 + &extra;
        prop_assert!(poly_lt(&p1, &p2));
        prop_assert!(poly_lt(&poly_mul(&p1, &p), &poly_mul(&p2, &p)));
        prop_assert_eq!(poly_mul(&p, &IntPolynomial::one()), p);
    }

    #[test]
    fn obstruction_is_monotone_in_candidates(base in nonzero_poly(), p in nonzero_poly(), grow in poly()) {
        let cand = vec![CandidateFactor::new("X", base.clone())];
        let v = nonproduct_obstruction(&p, 7, &cand).unwrap();
        if v.verdict == Verdict::NotProduct {
            let bigger = vec![CandidateFactor::new("X+", &base + &grow)];
            prop_assert_eq!(nonproduct_obstruction(&p, 7, &bigger).unwrap().verdict, Verdict::NotProduct);
        }
    }

    #[test]
    fn quaternion_norm_is_multiplicative_and_product_associative(
        a in proptest::array::uniform4(-50i64..=50),
        b in proptest::array::uniform4(-50i64..=50),
        c in proptest::array::uniform4(-50i64..=50),
    ) {
        let (p, q, r) = (Quaternion::from_slice(&a), Quaternion::from_slice(&b), Quaternion::from_slice(&c));
        prop_assert_eq!((p * q).norm_sqr(), p.norm_sqr() * q.norm_sqr());
        prop_assert_eq!((p * q) * r, p * (q * r));
        prop_assert_eq!((p * q).conj(), q.conj() * p.conj());
    }
}
