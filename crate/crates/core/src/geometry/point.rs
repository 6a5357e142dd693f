use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::jet::{Jet, Scalar};
use crate::error::{Error, Result};

/// Tolerance for the unit-norm and tangency invariants of points and vectors.
pub const TANGENCY_TOL: f64 = 1e-12;

/// Index of one of the three structures, `1`, `2` or `3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Alpha {
    One,
    Two,
    Three,
}

impl Alpha {
    pub const ALL: [Alpha; 3] = [Alpha::One, Alpha::Two, Alpha::Three];

    /// The cyclic (even) permutations `(α, β, γ)` of `(1, 2, 3)`.
    pub const EVEN_PERMUTATIONS: [(Alpha, Alpha, Alpha); 3] = [
        (Alpha::One, Alpha::Two, Alpha::Three),
        (Alpha::Two, Alpha::Three, Alpha::One),
        (Alpha::Three, Alpha::One, Alpha::Two),
    ];

    pub fn new(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Alpha::One),
            2 => Ok(Alpha::Two),
            3 => Ok(Alpha::Three),
            _ => Err(Error::InvalidIndex {
                what: "alpha",
                value: index as i64,
            }),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Alpha::One => 1,
            Alpha::Two => 2,
            Alpha::Three => 3,
        }
    }

    pub fn slot(self) -> usize {
        self.index() - 1
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

const ANGLE_BITS: u32 = 53;
const ANGLE_MASK: u64 = (1 << ANGLE_BITS) - 1;

/// A torus coordinate in `[0, 1)`, stored as a 53-bit fixed-point fraction so
/// that negation and addition modulo 1 are exact and convert to `f64` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct TorusAngle(u64);

impl TorusAngle {
    pub const ZERO: TorusAngle = TorusAngle(0);

    pub fn from_f64(t: f64) -> Self {
        let r = t.rem_euclid(1.0);
        TorusAngle(((r * (1u64 << ANGLE_BITS) as f64).round() as u64) & ANGLE_MASK)
    }

    pub fn from_bits(bits: u64) -> Self {
        TorusAngle(bits & ANGLE_MASK)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / (1u64 << ANGLE_BITS) as f64
    }

    pub fn wrapping_add(self, o: TorusAngle) -> TorusAngle {
        TorusAngle(self.0.wrapping_add(o.0) & ANGLE_MASK)
    }

    pub fn wrapping_neg(self) -> TorusAngle {
        TorusAngle(self.0.wrapping_neg() & ANGLE_MASK)
    }
}

/// A point of `S^{4l+3} × T^{4m}`: unit vector in `R^{4(l+1)}` and torus
/// coordinates `(x_1, x_i, x_j, x_k)` per block, modulo 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPoint {
    s: Vec<f64>,
    t: Vec<TorusAngle>,
}

impl ProductPoint {
    /// Normalizes the sphere part and reduces torus coordinates modulo 1.
    pub fn new(sphere: Vec<f64>, torus: &[f64]) -> Result<Self> {
        if sphere.is_empty() || !sphere.len().is_multiple_of(4) {
            return Err(Error::InvalidParameter(format!(
                "sphere part must have length 4(l+1), got {}",
                sphere.len()
            )));
        }
        if !torus.len().is_multiple_of(4) {
            return Err(Error::InvalidParameter(format!(
                "torus part must have length 4m, got {}",
                torus.len()
            )));
        }
        let norm = sphere.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter(
                "sphere part must be a nonzero finite vector".into(),
            ));
        }
        Ok(Self {
            s: sphere.into_iter().map(|x| x / norm).collect(),
            t: torus.iter().copied().map(TorusAngle::from_f64).collect(),
        })
    }

    /// Assembles a point without renormalizing. Only for maps known to
    /// preserve the unit sphere exactly (signed coordinate permutations).
    pub(crate) fn from_parts_exact(s: Vec<f64>, t: Vec<TorusAngle>) -> Self {
        Self { s, t }
    }

    /// Random point: normalized Gaussian on the sphere, uniform on the torus.
    pub fn random<R: Rng + ?Sized>(l: usize, m: usize, rng: &mut R) -> Self {
        let s: Vec<f64> = loop {
            let v: Vec<f64> = (0..4 * (l + 1)).map(|_| rng.sample(StandardNormal)).collect();
            if v.iter().map(|x| x * x).sum::<f64>() > 1e-6 {
                break v;
            }
        };
        let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self {
            s: s.into_iter().map(|x| x / norm).collect(),
            t: (0..4 * m)
                .map(|_| TorusAngle::from_bits(rng.gen::<u64>() >> 11))
                .collect(),
        }
    }

    pub fn sphere(&self) -> &[f64] {
        &self.s
    }

    pub fn torus(&self) -> &[TorusAngle] {
        &self.t
    }

    pub fn torus_f64(&self) -> Vec<f64> {
        self.t.iter().map(|a| a.to_f64()).collect()
    }

    /// `l` in `S^{4l+3}`.
    pub fn l(&self) -> usize {
        self.s.len() / 4 - 1
    }

    /// `m` in `T^{4m}`.
    pub fn m(&self) -> usize {
        self.t.len() / 4
    }

    /// Manifold dimension `4(l+m)+3`.
    pub fn dim(&self) -> usize {
        self.s.len() - 1 + self.t.len()
    }

    pub fn ambient(&self) -> AmbientPoint<f64> {
        AmbientPoint {
            s: self.s.clone(),
            t: self.torus_f64(),
        }
    }

    /// The point moved infinitesimally along `v`: `p + ε v` as jets.
    pub fn jet_along(&self, v: &AmbientVector<f64>) -> AmbientPoint<Jet> {
        AmbientPoint {
            s: self.s.iter().zip(&v.u).map(|(&x, &d)| Jet::new(x, d)).collect(),
            t: self.t.iter().zip(&v.w).map(|(a, &d)| Jet::new(a.to_f64(), d)).collect(),
        }
    }

    /// `p + h v` in ambient coordinates (not projected back to the sphere).
    pub fn displaced(&self, v: &AmbientVector<f64>, h: f64) -> AmbientPoint<f64> {
        AmbientPoint {
            s: self.s.iter().zip(&v.u).map(|(x, d)| x + h * d).collect(),
            t: self.t.iter().zip(&v.w).map(|(a, d)| a.to_f64() + h * d).collect(),
        }
    }
}

/// A point of the open ambient set `(R^{4(l+1)} \ {0}) × R^{4m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientPoint<T> {
    pub s: Vec<T>,
    pub t: Vec<T>,
}

/// A vector of `R^{4(l+1)} × R^{4m}`; tangent vectors, field values and
/// brackets all live here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbientVector<T> {
    pub u: Vec<T>,
    pub w: Vec<T>,
}

pub type TangentVector = AmbientVector<f64>;

impl<T: Scalar> AmbientVector<T> {
    pub fn zeros(sphere_len: usize, torus_len: usize) -> Self {
        Self {
            u: vec![T::zero(); sphere_len],
            w: vec![T::zero(); torus_len],
        }
    }

    pub fn dot(&self, o: &Self) -> T {
        let mut acc = T::zero();
        for (a, b) in self.u.iter().zip(&o.u).chain(self.w.iter().zip(&o.w)) {
            acc += *a * *b;
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            u: self.u.iter().zip(&o.u).map(|(&a, &b)| a + b).collect(),
            w: self.w.iter().zip(&o.w).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            u: self.u.iter().zip(&o.u).map(|(&a, &b)| a - b).collect(),
            w: self.w.iter().zip(&o.w).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            u: self.u.iter().map(|&a| a * c).collect(),
            w: self.w.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(-T::one())
    }

    /// Value parts, dropping derivative information.
    pub fn values(&self) -> AmbientVector<f64> {
        AmbientVector {
            u: self.u.iter().map(|a| a.value()).collect(),
            w: self.w.iter().map(|a| a.value()).collect(),
        }
    }
}

impl AmbientVector<Jet> {
    pub fn derivatives(&self) -> AmbientVector<f64> {
        AmbientVector {
            u: self.u.iter().map(|a| a.derivative).collect(),
            w: self.w.iter().map(|a| a.derivative).collect(),
        }
    }
}

impl AmbientVector<f64> {
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.u.iter().chain(&self.w).fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `|<u, s>|`: how far the sphere part is from `T_s S`.
    pub fn normal_component(&self, p: &ProductPoint) -> f64 {
        self.u.iter().zip(p.sphere()).map(|(a, b)| a * b).sum::<f64>().abs()
    }

    /// Builds a tangent vector, rejecting a sphere part that is not
    /// orthogonal to the base point.
    pub fn tangent_at(p: &ProductPoint, u: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        check_shape(p, &u, &w)?;
        let v = Self { u, w };
        let r = v.normal_component(p);
        if r > TANGENCY_TOL * v.norm().max(1.0) {
            return Err(Error::NotTangent { residual: r });
        }
        Ok(v)
    }

    /// Orthogonal projection of an ambient vector onto `T_p M`.
    pub fn project_onto(p: &ProductPoint, u: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        check_shape(p, &u, &w)?;
        let c: f64 = u.iter().zip(p.sphere()).map(|(a, b)| a * b).sum();
        Ok(Self {
            u: u.iter().zip(p.sphere()).map(|(a, s)| a - c * s).collect(),
            w,
        })
    }

    /// Random unit tangent vector at `p`.
    pub fn random_tangent<R: Rng + ?Sized>(p: &ProductPoint, rng: &mut R) -> Self {
        let u: Vec<f64> = (0..p.sphere().len()).map(|_| rng.sample(StandardNormal)).collect();
        let w: Vec<f64> = (0..p.torus().len()).map(|_| rng.sample(StandardNormal)).collect();
        let v = Self::project_onto(p, u, w).expect("shapes match by construction");
        let n = v.norm();
        v.scaled(1.0 / n)
    }

    /// Random unit vector tangent to the sphere factor only.
    pub fn random_sphere_tangent<R: Rng + ?Sized>(p: &ProductPoint, rng: &mut R) -> Self {
        let mut v = Self::random_tangent(p, rng);
        v.w.iter_mut().for_each(|x| *x = 0.0);
        let n = v.norm();
        v.scaled(1.0 / n)
    }

    /// Random unit vector tangent to the torus factor only.
    pub fn random_torus_tangent<R: Rng + ?Sized>(p: &ProductPoint, rng: &mut R) -> Self {
        let w: Vec<f64> = (0..p.torus().len()).map(|_| rng.sample(StandardNormal)).collect();
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self {
            u: vec![0.0; p.sphere().len()],
            w: w.into_iter().map(|x| x / n).collect(),
        }
    }
}

fn check_shape(p: &ProductPoint, u: &[f64], w: &[f64]) -> Result<()> {
    if u.len() != p.sphere().len() {
        return Err(Error::DimensionMismatch {
            expected: p.sphere().len(),
            found: u.len(),
        });
    }
    if w.len() != p.torus().len() {
        return Err(Error::DimensionMismatch {
            expected: p.torus().len(),
            found: w.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn construction_normalizes_and_reduces() {
        let p = ProductPoint::new(vec![3.0, 0.0, 4.0, 0.0, 0.0, 0.0, 0.0, 0.0], &[1.25, -0.25, 0.0, 2.0]).unwrap();
        assert!((p.sphere().iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(p.torus_f64(), vec![0.25, 0.75, 0.0, 0.0]);
        assert_eq!((p.l(), p.m(), p.dim()), (1, 1, 11));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ProductPoint::new(vec![1.0, 0.0, 0.0], &[]).is_err());
        assert!(ProductPoint::new(vec![0.0; 4], &[]).is_err());
        assert!(ProductPoint::new(vec![1.0, 0.0, 0.0, 0.0], &[0.1]).is_err());
    }

    #[test]
    fn torus_angle_negation_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = TorusAngle::from_bits(rng.gen());
            assert_eq!(a.wrapping_neg().wrapping_neg(), a);
            assert_eq!(a.wrapping_add(a.wrapping_neg()), TorusAngle::ZERO);
            assert!((0.0..1.0).contains(&a.to_f64()));
        }
        // rem_euclid rounds tiny negatives up to exactly 1.0
        assert_eq!(TorusAngle::from_f64(-1e-300), TorusAngle::ZERO);
    }

    #[test]
    fn tangency_is_enforced() {
        let p = ProductPoint::new(vec![1.0, 0.0, 0.0, 0.0], &[0.0; 4]).unwrap();
        assert!(TangentVector::tangent_at(&p, vec![0.0, 1.0, 0.0, 0.0], vec![0.0; 4]).is_ok());
        let err = TangentVector::tangent_at(&p, vec![0.5, 1.0, 0.0, 0.0], vec![0.0; 4]).unwrap_err();
        assert_eq!(err, Error::NotTangent { residual: 0.5 });
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = ProductPoint::random(2, 1, &mut rng);
        let v = TangentVector::random_tangent(&q, &mut rng);
        assert!(v.normal_component(&q) < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }
}
