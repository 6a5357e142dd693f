use nalgebra::{DMatrix, DVector};

use super::field::d_eta_vectors;
use super::point::{Alpha, ProductPoint, TangentVector};
use super::structure::Structure;
use crate::error::Result;

/// All structure tensors at one point, written in an orthonormal basis of
/// `T_p M` whose first three vectors are `ξ_1, ξ_2, ξ_3`.
#[derive(Debug, Clone)]
pub struct StructureFrame {
    pub basis: Vec<TangentVector>,
    pub phi: [DMatrix<f64>; 3],
    pub xi: [DVector<f64>; 3],
    pub eta: [DVector<f64>; 3],
    pub metric: DMatrix<f64>,
    /// `Φ_α(e_i, e_j) = g(e_i, φ_α e_j)`.
    pub fundamental: [DMatrix<f64>; 3],
    pub d_eta: [DMatrix<f64>; 3],
}

/// Orthonormal basis of `T_p M` by Gram–Schmidt, seeded with the Reeb fields,
/// then projected ambient sphere axes, then torus axes.
pub fn tangent_basis(st: &Structure, p: &ProductPoint) -> Vec<TangentVector> {
    let ls = st.sphere_len();
    let lt = st.torus_len();
    let mut seeds: Vec<TangentVector> = Alpha::ALL.iter().map(|&a| st.sphere_reeb(a, p)).collect();
    for i in 0..ls {
        let mut u = vec![0.0; ls];
        u[i] = 1.0;
        seeds.push(TangentVector::project_onto(p, u, vec![0.0; lt]).expect("shapes match"));
    }
    for j in 0..lt {
        let mut w = vec![0.0; lt];
        w[j] = 1.0;
        seeds.push(TangentVector { u: vec![0.0; ls], w });
    }
    let mut basis: Vec<TangentVector> = Vec::with_capacity(st.dim());
    for mut v in seeds {
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                v = v.sub(&b.scaled(v.dot(b)));
            }
        }
        let n = v.norm();
        if n > 1e-6 {
            basis.push(v.scaled(1.0 / n));
        }
        if basis.len() == st.dim() {
            break;
        }
    }
    assert_eq!(basis.len(), st.dim(), "Gram–Schmidt lost a dimension");
    basis
}

impl StructureFrame {
    pub fn build(st: &Structure, p: &ProductPoint) -> Result<Self> {
        st.check_point(p)?;
        let basis = tangent_basis(st, p);
        let n = basis.len();
        let amb = p.ambient();
        let coords = |v: &TangentVector| DVector::from_iterator(n, basis.iter().map(|b| b.dot(v)));
        let metric = DMatrix::from_fn(n, n, |i, j| st.metric(&basis[i], &basis[j]));

        let mut phi = Vec::with_capacity(3);
        let mut xi = Vec::with_capacity(3);
        let mut eta = Vec::with_capacity(3);
        let mut fundamental = Vec::with_capacity(3);
        let mut d_eta = Vec::with_capacity(3);
        for a in Alpha::ALL {
            let images: Vec<TangentVector> = basis.iter().map(|b| st.phi_at(a, &amb, b)).collect();
            phi.push(DMatrix::from_fn(n, n, |i, j| basis[i].dot(&images[j])));
            fundamental.push(DMatrix::from_fn(n, n, |i, j| st.metric(&basis[i], &images[j])));
            xi.push(coords(&st.sphere_reeb(a, p)));
            eta.push(DVector::from_iterator(n, basis.iter().map(|b| st.eta(a, p, b))));
            let mut d = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let v = d_eta_vectors(st, a, p, &basis[i], &basis[j]);
                    d[(i, j)] = v;
                    d[(j, i)] = -v;
                }
            }
            d_eta.push(d);
        }
        let arr = |v: Vec<DMatrix<f64>>| -> [DMatrix<f64>; 3] { v.try_into().expect("three structures") };
        Ok(Self {
            basis,
            phi: arr(phi),
            xi: xi.try_into().expect("three structures"),
            eta: eta.try_into().expect("three structures"),
            metric,
            fundamental: arr(fundamental),
            d_eta: arr(d_eta),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn frame_shapes_and_skewness() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (l, m) in [(0, 1), (1, 1), (1, 2), (2, 1)] {
            let st = Structure::new(l, m);
            let p = ProductPoint::random(l, m, &mut rng);
            let fr = StructureFrame::build(&st, &p).unwrap();
            assert_eq!(fr.dim(), 4 * (l + m) + 3);
            assert!((&fr.metric - DMatrix::identity(fr.dim(), fr.dim())).amax() < 1e-12);
            for a in 0..3 {
                assert!((&fr.fundamental[a] + fr.fundamental[a].transpose()).amax() < 1e-10);
                assert!((fr.xi[a][a] - 1.0).abs() < 1e-14);
                // φ² = -I + η ⊗ ξ as matrices
                let lhs = &fr.phi[a] * &fr.phi[a];
                let rhs = -DMatrix::identity(fr.dim(), fr.dim()) + &fr.xi[a] * fr.eta[a].transpose();
                assert!((lhs - rhs).amax() < 1e-12);
            }
        }
    }

    #[test]
    fn frame_rejects_foreign_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let p = ProductPoint::random(2, 1, &mut rng);
        assert!(StructureFrame::build(&Structure::new(1, 1), &p).is_err());
    }
}
