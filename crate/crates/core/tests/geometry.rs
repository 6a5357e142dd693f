use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qsasaki::geometry::{
    action_diag, d_one_form, lie_bracket, lie_bracket_finite_difference, nijenhuis, tangent_basis, Alpha, Extension,
    Fault, OneForm, ProductPoint, Structure, StructureFrame, TangentVector, VectorField,
};
use qsasaki::verifier::{check_3_structure, check_action, check_almost_contact, Config};

const CONFIGS: [(usize, usize); 4] = [(0, 1), (1, 1), (1, 2), (2, 1)];

#[test]
fn jet_brackets_agree_with_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for (l, m) in CONFIGS {
        let st = Structure::new(l, m);
        for _ in 0..16 {
            let p = ProductPoint::random(l, m, &mut rng);
            let x = VectorField::random(&st, &mut rng);
            let y = VectorField::random(&st, &mut rng);
            let exact = lie_bracket(&st, &p, &x, &y);
            let fd = lie_bracket_finite_difference(&st, &p, &x, &y, 1e-5);
            assert!(exact.sub(&fd).max_abs() < 1e-6, "(l, m) = ({l}, {m})");
        }
    }
}

#[test]
fn brackets_of_tangent_fields_stay_tangent() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let st = Structure::new(1, 2);
    for _ in 0..32 {
        let p = ProductPoint::random(1, 2, &mut rng);
        let x = VectorField::random(&st, &mut rng);
        let y = VectorField::Reeb(Alpha::Two).scaled(qsasaki::geometry::ScalarField::Constant(0.5));
        let b = lie_bracket(&st, &p, &x, &y);
        assert!(b.normal_component(&p) < 1e-12);
        assert!(b.add(&lie_bracket(&st, &p, &y, &x)).max_abs() < 1e-14);
    }
}

#[test]
fn derivatives_do_not_depend_on_the_extension() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let st = Structure::new(2, 1);
    for _ in 0..16 {
        let p = ProductPoint::random(2, 1, &mut rng);
        let v = TangentVector::random_tangent(&p, &mut rng);
        let w = TangentVector::random_tangent(&p, &mut rng);
        for a in Alpha::ALL {
            let ext = |u: &TangentVector, e| VectorField::extend(&p, u, e);
            let c = Extension::ConstantProjection;
            let q = Extension::Perturbed { seed: 9 };
            let d1 = d_one_form(&st, OneForm::Eta(a), &p, &ext(&v, c), &ext(&w, c));
            let d2 = d_one_form(
                &st,
                OneForm::Eta(a),
                &p,
                &ext(&v, q),
                &ext(&w, Extension::Perturbed { seed: 10 }),
            );
            assert!((d1 - d2).abs() < 1e-8);
            let n1 = nijenhuis(&st, a, &p, &ext(&v, c), &ext(&w, c));
            let n2 = nijenhuis(&st, a, &p, &ext(&v, q), &ext(&w, q));
            assert!(n1.sub(&n2).max_abs() < 1e-8);
        }
    }
}

#[test]
fn frames_are_orthonormal_and_start_with_reeb_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for (l, m) in CONFIGS {
        let st = Structure::new(l, m);
        let p = ProductPoint::random(l, m, &mut rng);
        let basis = tangent_basis(&st, &p);
        assert_eq!(basis.len(), st.dim());
        for a in Alpha::ALL {
            assert!(basis[a.slot()].sub(&st.sphere_reeb(a, &p)).max_abs() < 1e-14);
        }
        let fr = StructureFrame::build(&st, &p).unwrap();
        for a in Alpha::ALL {
            let d = &fr.d_eta[a.slot()];
            assert!((d + d.transpose()).amax() < 1e-14);
        }
    }
}

#[test]
fn action_has_order_four_on_every_configuration() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for (l, m) in CONFIGS {
        for _ in 0..32 {
            let p = ProductPoint::random(l, m, &mut rng);
            assert_eq!(action_diag(4, &p), p);
            assert_ne!(action_diag(1, &p), p);
        }
    }
}

#[test]
fn injected_faults_are_caught() {
    let cfg = Config::new(1, 1, 16, 5, 1e-9);
    let row = Fault::NegatePhiRow {
        alpha: Alpha::One,
        torus_row: 2,
    };
    let block = Fault::NegatePhiBlock {
        alpha: Alpha::Three,
        torus_block: 0,
    };
    let ac = check_almost_contact(&cfg.clone().with_fault(row)).unwrap();
    assert!(!ac.passed);
    assert!((ac.max_residual() - 2.0).abs() < 1e-12);
    let three = check_3_structure(&cfg.clone().with_fault(block)).unwrap();
    assert!(!three.passed);
    assert!((three.max_residual() - 2.0).abs() < 1e-12);
    assert!(!check_action(&cfg.clone().with_fault(row)).unwrap().passed);
    assert!(check_almost_contact(&cfg).unwrap().passed);
}
