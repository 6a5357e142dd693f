//! Vector-field recipes and the derivative operations built on them.
//!
//! A recipe is a closed-form smooth map from the ambient open set to ambient
//! vectors that is tangent to every sphere `|y_s| = r`. Brackets are taken in
//! ambient coordinates, `[X, Y] = D_X Y - D_Y X`, with each directional
//! derivative read off a single jet evaluation.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;

use super::jet::Scalar;
use super::point::{Alpha, AmbientPoint, AmbientVector, ProductPoint, TangentVector};
use super::structure::{dot, Structure};

/// Smooth scalar functions used as coefficients in recipes.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    Constant(f64),
    /// `<a, y_s - s0> + sin(2π <k, y_t - t0>)`; zero at `(s0, t0)`.
    VanishingAt {
        s0: Vec<f64>,
        t0: Vec<f64>,
        a: Vec<f64>,
        k: Vec<i64>,
    },
    /// `c + <a, y_s> + sin(2π <k, y_t> + phase)`.
    Wave {
        c: f64,
        a: Vec<f64>,
        k: Vec<i64>,
        phase: f64,
    },
}

impl ScalarField {
    pub fn eval<T: Scalar>(&self, y: &AmbientPoint<T>) -> T {
        match self {
            ScalarField::Constant(c) => T::constant(*c),
            ScalarField::VanishingAt { s0, t0, a, k } => {
                let mut lin = T::zero();
                for ((&ys, &s), &ai) in y.s.iter().zip(s0).zip(a) {
                    lin += (ys - T::constant(s)).scale(ai);
                }
                let mut arg = T::zero();
                for ((&yt, &t), &ki) in y.t.iter().zip(t0).zip(k) {
                    arg += (yt - T::constant(t)).scale(TAU * ki as f64);
                }
                lin + arg.sin()
            }
            ScalarField::Wave { c, a, k, phase } => {
                let mut acc = T::constant(*c);
                for (&ys, &ai) in y.s.iter().zip(a) {
                    acc += ys.scale(ai);
                }
                let mut arg = T::constant(*phase);
                for (&yt, &ki) in y.t.iter().zip(k) {
                    arg += yt.scale(TAU * ki as f64);
                }
                acc + arg.sin()
            }
        }
    }
}

/// A vector field on the ambient open set, tangent to the spheres.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorField {
    Reeb(Alpha),
    /// Orthogonal projection of the constant `u` onto `T_y S`, constant `w`.
    Projected {
        u: Vec<f64>,
        w: Vec<f64>,
    },
    Phi(Alpha, Box<VectorField>),
    Scaled(ScalarField, Box<VectorField>),
    Sum(Box<VectorField>, Box<VectorField>),
}

/// How a single tangent vector is extended to a field around its base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// Projection of the constant ambient vector.
    ConstantProjection,
    /// The constant projection plus `f · Z`, where `f` vanishes at the base
    /// point and `Z` is another projected field, both drawn from `seed`.
    Perturbed { seed: u64 },
}

impl VectorField {
    pub fn projected(v: &TangentVector) -> Self {
        VectorField::Projected {
            u: v.u.clone(),
            w: v.w.clone(),
        }
    }

    pub fn phi(self, alpha: Alpha) -> Self {
        VectorField::Phi(alpha, Box::new(self))
    }

    pub fn scaled(self, f: ScalarField) -> Self {
        VectorField::Scaled(f, Box::new(self))
    }

    pub fn plus(self, o: VectorField) -> Self {
        VectorField::Sum(Box::new(self), Box::new(o))
    }

    /// Extend `v ∈ T_p M` to a field whose value at `p` is `v`.
    pub fn extend(p: &ProductPoint, v: &TangentVector, ext: Extension) -> Self {
        let base = Self::projected(v);
        match ext {
            Extension::ConstantProjection => base,
            Extension::Perturbed { seed } => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let partner = TangentVector {
                    u: (0..v.u.len()).map(|_| rng.sample(StandardNormal)).collect(),
                    w: (0..v.w.len()).map(|_| rng.sample(StandardNormal)).collect(),
                };
                let f = ScalarField::VanishingAt {
                    s0: p.sphere().to_vec(),
                    t0: p.torus_f64(),
                    a: (0..v.u.len()).map(|_| rng.sample(StandardNormal)).collect(),
                    k: (0..v.w.len()).map(|_| rng.gen_range(-2..=2)).collect(),
                };
                base.plus(Self::projected(&partner).scaled(f))
            }
        }
    }

    /// A random field with non-constant coefficients on both factors.
    pub fn random<R: Rng + ?Sized>(st: &Structure, rng: &mut R) -> Self {
        let ls = st.sphere_len();
        let lt = st.torus_len();
        // unit-scale coefficients keep |X(p)| of order one in every dimension
        let mut gauss = |n: usize, scale: f64| -> Vec<f64> {
            (0..n).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
        };
        let sv = 1.0 / ((ls + lt) as f64).sqrt();
        let u1 = gauss(ls, sv);
        let w1 = gauss(lt, sv);
        let u2 = gauss(ls, sv);
        let w2 = gauss(lt, sv);
        let a = gauss(ls, 1.0 / (ls as f64).sqrt());
        let c = gauss(1, 1.0)[0];
        let phase = gauss(1, 1.0)[0];
        let k: Vec<i64> = (0..lt).map(|_| rng.gen_range(-1..=1)).collect();
        let alpha = Alpha::ALL[rng.gen_range(0..3)];
        let coef = ScalarField::Wave { c, a, k, phase };
        VectorField::Projected { u: u1, w: w1 }.plus(VectorField::Projected { u: u2, w: w2 }.phi(alpha).scaled(coef))
    }

    pub fn eval<T: Scalar>(&self, st: &Structure, y: &AmbientPoint<T>) -> AmbientVector<T> {
        match self {
            VectorField::Reeb(alpha) => st.reeb_at(*alpha, y),
            VectorField::Projected { u, w } => {
                let n = st.normal(y);
                let uc: Vec<T> = u.iter().map(|&x| T::constant(x)).collect();
                let c = dot(&uc, &n);
                AmbientVector {
                    u: uc.iter().zip(&n).map(|(&a, &b)| a - c * b).collect(),
                    w: w.iter().map(|&x| T::constant(x)).collect(),
                }
            }
            VectorField::Phi(alpha, inner) => {
                let v = inner.eval(st, y);
                st.phi_at(*alpha, y, &v)
            }
            VectorField::Scaled(f, inner) => inner.eval(st, y).scaled(f.eval(y)),
            VectorField::Sum(a, b) => a.eval(st, y).add(&b.eval(st, y)),
        }
    }

    pub fn at(&self, st: &Structure, p: &ProductPoint) -> TangentVector {
        self.eval(st, &p.ambient())
    }
}

/// `D_v F` at `p` for the field `F`, via one jet evaluation.
pub fn directional_derivative(
    st: &Structure,
    p: &ProductPoint,
    v: &TangentVector,
    field: &VectorField,
) -> TangentVector {
    field.eval(st, &p.jet_along(v)).derivatives()
}

/// `v(f)` at `p` for a scalar function given as a recipe over any [`Scalar`].
pub fn derivative_of<F>(p: &ProductPoint, v: &TangentVector, f: F) -> f64
where
    F: Fn(&AmbientPoint<super::jet::Jet>) -> super::jet::Jet,
{
    f(&p.jet_along(v)).derivative
}

/// `[X, Y](p) = D_X Y - D_Y X`.
pub fn lie_bracket(st: &Structure, p: &ProductPoint, x: &VectorField, y: &VectorField) -> TangentVector {
    let xp = x.at(st, p);
    let yp = y.at(st, p);
    directional_derivative(st, p, &xp, y).sub(&directional_derivative(st, p, &yp, x))
}

/// The same bracket from central finite differences with step `h`.
pub fn lie_bracket_finite_difference(
    st: &Structure,
    p: &ProductPoint,
    x: &VectorField,
    y: &VectorField,
    h: f64,
) -> TangentVector {
    let xp = x.at(st, p);
    let yp = y.at(st, p);
    let fd = |dir: &TangentVector, f: &VectorField| {
        let plus = f.eval(st, &p.displaced(dir, h));
        let minus = f.eval(st, &p.displaced(dir, -h));
        plus.sub(&minus).scaled(1.0 / (2.0 * h))
    };
    fd(&xp, y).sub(&fd(&yp, x))
}

/// 1-forms with recipes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneForm {
    Eta(Alpha),
}

impl OneForm {
    pub fn eval<T: Scalar>(&self, st: &Structure, y: &AmbientPoint<T>, v: &AmbientVector<T>) -> T {
        match self {
            OneForm::Eta(alpha) => st.eta_at(*alpha, y, v),
        }
    }
}

/// 2-forms with recipes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoForm {
    Fundamental(Alpha),
}

impl TwoForm {
    pub fn eval<T: Scalar>(
        &self,
        st: &Structure,
        y: &AmbientPoint<T>,
        a: &AmbientVector<T>,
        b: &AmbientVector<T>,
    ) -> T {
        match self {
            TwoForm::Fundamental(alpha) => st.fundamental_at(*alpha, y, a, b),
        }
    }
}

/// `X(ω(Y))` at `p`.
fn derive_pairing(st: &Structure, p: &ProductPoint, form: OneForm, x: &VectorField, y: &VectorField) -> f64 {
    let xp = x.at(st, p);
    let jp = p.jet_along(&xp);
    form.eval(st, &jp, &y.eval(st, &jp)).derivative
}

/// `dω(X, Y) = X ω(Y) - Y ω(X) - ω([X, Y])`.
pub fn d_one_form(st: &Structure, form: OneForm, p: &ProductPoint, x: &VectorField, y: &VectorField) -> f64 {
    let amb = p.ambient();
    let bracket = lie_bracket(st, p, x, y);
    derive_pairing(st, p, form, x, y) - derive_pairing(st, p, form, y, x) - form.eval(st, &amb, &bracket)
}

/// `X(Φ(Y, Z))` at `p`.
fn derive_two_form(
    st: &Structure,
    p: &ProductPoint,
    form: TwoForm,
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
) -> f64 {
    let xp = x.at(st, p);
    let jp = p.jet_along(&xp);
    form.eval(st, &jp, &y.eval(st, &jp), &z.eval(st, &jp)).derivative
}

/// Six-term expansion of `dΦ(X, Y, Z)`.
pub fn d_two_form(
    st: &Structure,
    form: TwoForm,
    p: &ProductPoint,
    x: &VectorField,
    y: &VectorField,
    z: &VectorField,
) -> f64 {
    let amb = p.ambient();
    let (xp, yp, zp) = (x.at(st, p), y.at(st, p), z.at(st, p));
    let xy = lie_bracket(st, p, x, y);
    let yz = lie_bracket(st, p, y, z);
    let zx = lie_bracket(st, p, z, x);
    derive_two_form(st, p, form, x, y, z)
        + derive_two_form(st, p, form, y, z, x)
        + derive_two_form(st, p, form, z, x, y)
        - form.eval(st, &amb, &xy, &zp)
        - form.eval(st, &amb, &yz, &xp)
        - form.eval(st, &amb, &zx, &yp)
}

/// Torsion of `φ_α`: `[φ,φ](X,Y) + dη_α(X,Y) ξ_α`, where
/// `[φ,φ](X,Y) = φ²[X,Y] + [φX,φY] - φ[φX,Y] - φ[X,φY]`.
///
/// With `dη` taken without the factor `1/2` (as in [`d_one_form`]) the
/// coefficient of `dη ⊗ ξ` is 1; this is the usual `[φ,φ] + 2dη⊗ξ` in the
/// half-normalized convention.
pub fn nijenhuis(st: &Structure, alpha: Alpha, p: &ProductPoint, x: &VectorField, y: &VectorField) -> TangentVector {
    let amb = p.ambient();
    let phi = |v: &TangentVector| st.phi_at(alpha, &amb, v);
    let px = x.clone().phi(alpha);
    let py = y.clone().phi(alpha);
    let xy = lie_bracket(st, p, x, y);
    let pxpy = lie_bracket(st, p, &px, &py);
    let pxy = lie_bracket(st, p, &px, y);
    let xpy = lie_bracket(st, p, x, &py);
    let torsion = phi(&phi(&xy)).add(&pxpy).sub(&phi(&pxy)).sub(&phi(&xpy));
    let deta = d_one_form(st, OneForm::Eta(alpha), p, x, y);
    torsion.add(&st.reeb_at(alpha, &amb).scaled(deta))
}

/// Convenience: `dη_α(v, w)` for tangent vectors extended by constant projection.
pub fn d_eta_vectors(st: &Structure, alpha: Alpha, p: &ProductPoint, v: &TangentVector, w: &TangentVector) -> f64 {
    d_one_form(
        st,
        OneForm::Eta(alpha),
        p,
        &VectorField::extend(p, v, Extension::ConstantProjection),
        &VectorField::extend(p, w, Extension::ConstantProjection),
    )
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn north_pole(l: usize, m: usize) -> ProductPoint {
        let mut s = vec![0.0; 4 * (l + 1)];
        s[0] = 1.0;
        ProductPoint::new(s, &vec![0.0; 4 * m]).unwrap()
    }

    #[test]
    fn constant_torus_fields_commute() {
        let st = Structure::new(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = ProductPoint::random(1, 1, &mut rng);
        let x = VectorField::projected(&TangentVector::random_torus_tangent(&p, &mut rng));
        let y = VectorField::projected(&TangentVector::random_torus_tangent(&p, &mut rng));
        assert_eq!(lie_bracket(&st, &p, &x, &y).max_abs(), 0.0);
    }

    #[test]
    fn reeb_bracket_at_north_pole_by_hand() {
        // On the unit sphere ξ_α(y) = -J_α y is linear, so
        // [ξ_1, ξ_2] = (J_2 J_1 - J_1 J_2) y = -2 J_3 y = 2 ξ_3.
        let st = Structure::new(1, 1);
        let p = north_pole(1, 1);
        let br = lie_bracket(&st, &p, &VectorField::Reeb(Alpha::One), &VectorField::Reeb(Alpha::Two));
        let expected = TangentVector {
            u: vec![0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 0.0],
            w: vec![0.0; 4],
        };
        assert!(br.sub(&expected).max_abs() < 1e-14, "{br:?}");
    }

    #[test]
    fn bracket_is_antisymmetric_and_tangent() {
        let st = Structure::new(1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let p = ProductPoint::random(1, 2, &mut rng);
            let x = VectorField::random(&st, &mut rng);
            let y = VectorField::random(&st, &mut rng);
            let xy = lie_bracket(&st, &p, &x, &y);
            let yx = lie_bracket(&st, &p, &y, &x);
            assert!(xy.add(&yx).max_abs() < 1e-9);
            assert!(xy.normal_component(&p) < 1e-9 * xy.norm().max(1.0));
        }
    }

    #[test]
    fn bracket_matches_finite_differences() {
        let st = Structure::new(2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let p = ProductPoint::random(2, 1, &mut rng);
            let x = VectorField::random(&st, &mut rng);
            let y = VectorField::random(&st, &mut rng);
            let exact = lie_bracket(&st, &p, &x, &y);
            let fd = lie_bracket_finite_difference(&st, &p, &x, &y, 1e-5);
            assert!(exact.sub(&fd).max_abs() < 1e-6, "{}", exact.sub(&fd).max_abs());
        }
    }

    #[test]
    fn d_eta_vanishes_on_torus_and_along_reeb() {
        let st = Structure::new(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..20 {
            let p = ProductPoint::random(1, 1, &mut rng);
            let t1 = TangentVector::random_torus_tangent(&p, &mut rng);
            let t2 = TangentVector::random_torus_tangent(&p, &mut rng);
            let v = TangentVector::random_tangent(&p, &mut rng);
            for a in Alpha::ALL {
                assert!(d_eta_vectors(&st, a, &p, &t1, &t2).abs() < 1e-12);
                let xa = st.sphere_reeb(a, &p);
                assert!(d_eta_vectors(&st, a, &p, &xa, &v).abs() < 1e-12);
                let x = VectorField::random(&st, &mut rng);
                let y = VectorField::random(&st, &mut rng);
                let f = OneForm::Eta(a);
                assert!((d_one_form(&st, f, &p, &x, &y) + d_one_form(&st, f, &p, &y, &x)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn d_eta_on_other_reeb_pairs_is_minus_c() {
        // dη_α(ξ_β, ξ_γ) = -η_α([ξ_β, ξ_γ]) = -2 for (α, β, γ) even.
        let st = Structure::new(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let p = ProductPoint::random(1, 1, &mut rng);
        for (a, b, c) in Alpha::EVEN_PERMUTATIONS {
            let v = d_eta_vectors(&st, a, &p, &st.sphere_reeb(b, &p), &st.sphere_reeb(c, &p));
            assert!((v + 2.0).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn fundamental_forms_are_closed() {
        let st = Structure::new(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..10 {
            let p = ProductPoint::random(1, 1, &mut rng);
            let x = VectorField::random(&st, &mut rng);
            let y = VectorField::random(&st, &mut rng);
            let z = VectorField::random(&st, &mut rng);
            for a in Alpha::ALL {
                let f = TwoForm::Fundamental(a);
                let v = d_two_form(&st, f, &p, &x, &y, &z);
                assert!(v.abs() < 1e-8, "dΦ = {v}");
                let swapped = d_two_form(&st, f, &p, &y, &x, &z);
                let rotated = d_two_form(&st, f, &p, &y, &z, &x);
                assert!((v + swapped).abs() < 1e-8 && (v - rotated).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn structures_are_normal() {
        let st = Structure::new(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..10 {
            let p = ProductPoint::random(1, 1, &mut rng);
            let x = VectorField::random(&st, &mut rng);
            let y = VectorField::random(&st, &mut rng);
            for a in Alpha::ALL {
                assert!(nijenhuis(&st, a, &p, &x, &y).max_abs() < 1e-8);
            }
        }
    }

    #[test]
    fn extensions_give_identical_tensor_values() {
        let st = Structure::new(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for i in 0..10 {
            let p = ProductPoint::random(1, 1, &mut rng);
            let v = TangentVector::random_tangent(&p, &mut rng);
            let w = TangentVector::random_tangent(&p, &mut rng);
            let plain = |t: &TangentVector| VectorField::extend(&p, t, Extension::ConstantProjection);
            let bent = |t: &TangentVector, s| VectorField::extend(&p, t, Extension::Perturbed { seed: s });
            let (xv, xw) = (bent(&v, 2 * i), bent(&w, 2 * i + 1));
            assert!(xv.at(&st, &p).sub(&v).max_abs() < 1e-15);
            // The bracket itself is not tensorial, but dη is.
            for a in Alpha::ALL {
                let d0 = d_one_form(&st, OneForm::Eta(a), &p, &plain(&v), &plain(&w));
                let d1 = d_one_form(&st, OneForm::Eta(a), &p, &xv, &xw);
                assert!((d0 - d1).abs() < 1e-8);
                let n0 = nijenhuis(&st, a, &p, &plain(&v), &plain(&w));
                let n1 = nijenhuis(&st, a, &p, &xv, &xw);
                assert!(n0.sub(&n1).max_abs() < 1e-8);
            }
        }
    }
}
