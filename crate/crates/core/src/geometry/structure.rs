//! The tensors `(φ_α, ξ_α, η_α, g)` of the product `S^{4l+3} × T^{4m}`.
//!
//! On the sphere factor, with `N(y) = y/|y|` the outer unit normal:
//!
//! ```text
//! ξ_α = -J_α N,    η_α(X) = <X, ξ_α>,    φ_α X = J_α X - <J_α X, N> N
//! ```
//!
//! and on the torus factor `φ_α` is left multiplication by `i, j, k` on each
//! quaternionic block while `ξ_α` and `η_α` vanish. All formulas are written
//! over a generic [`Scalar`] on the open set `y_s ≠ 0`, so the same code gives
//! values (`f64`) and directional derivatives ([`Jet`](super::Jet)).

use serde::{Deserialize, Serialize};

use super::jet::Scalar;
use super::point::{Alpha, AmbientPoint, AmbientVector, ProductPoint, TangentVector, TANGENCY_TOL};
use crate::error::{Error, Result};
use crate::quatlin::{apply_unit, Side, UnitQuaternion};

/// Deliberate corruption of `φ_α`, used to show the checks are not vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Flip the sign of one ambient torus coordinate of `φ_α X`.
    NegatePhiRow { alpha: Alpha, torus_row: usize },
    /// Flip the sign of `φ_α` on one whole quaternionic torus block.
    NegatePhiBlock { alpha: Alpha, torus_block: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Structure {
    l: usize,
    m: usize,
    fault: Option<Fault>,
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

pub(crate) fn structure_unit(alpha: Alpha) -> UnitQuaternion {
    match alpha {
        Alpha::One => UnitQuaternion::I,
        Alpha::Two => UnitQuaternion::J,
        Alpha::Three => UnitQuaternion::K,
    }
}

impl Structure {
    pub fn new(l: usize, m: usize) -> Self {
        Self { l, m, fault: None }
    }

    pub fn with_fault(mut self, fault: Fault) -> Self {
        self.fault = Some(fault);
        self
    }

    pub fn fault(&self) -> Option<Fault> {
        self.fault
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sphere_len(&self) -> usize {
        4 * (self.l + 1)
    }

    pub fn torus_len(&self) -> usize {
        4 * self.m
    }

    pub fn dim(&self) -> usize {
        4 * (self.l + self.m) + 3
    }

    /// Rank `4l+3` of each `η_α`, the dimension of the sphere factor.
    pub fn expected_rank(&self) -> usize {
        4 * self.l + 3
    }

    pub(crate) fn check_point(&self, p: &ProductPoint) -> Result<()> {
        if p.l() != self.l || p.m() != self.m {
            return Err(Error::InvalidParameter(format!(
                "point lives on l={}, m={} but structure has l={}, m={}",
                p.l(),
                p.m(),
                self.l,
                self.m
            )));
        }
        Ok(())
    }

    pub fn normal<T: Scalar>(&self, y: &AmbientPoint<T>) -> Vec<T> {
        let r = dot(&y.s, &y.s).sqrt();
        y.s.iter().map(|&x| x / r).collect()
    }

    pub fn reeb_at<T: Scalar>(&self, alpha: Alpha, y: &AmbientPoint<T>) -> AmbientVector<T> {
        let n = self.normal(y);
        let u = apply_unit(Side::Left, structure_unit(alpha), &n)
            .into_iter()
            .map(|x| -x)
            .collect();
        AmbientVector {
            u,
            w: vec![T::zero(); self.torus_len()],
        }
    }

    pub fn phi_at<T: Scalar>(&self, alpha: Alpha, y: &AmbientPoint<T>, v: &AmbientVector<T>) -> AmbientVector<T> {
        let n = self.normal(y);
        let j = structure_unit(alpha);
        let ju = apply_unit(Side::Left, j, &v.u);
        let normal_part = dot(&ju, &n);
        let u = ju.iter().zip(&n).map(|(&a, &b)| a - normal_part * b).collect();
        let mut w = apply_unit(Side::Left, j, &v.w);
        match self.fault {
            Some(Fault::NegatePhiRow { alpha: a, torus_row }) if a == alpha && torus_row < w.len() => {
                w[torus_row] = -w[torus_row];
            }
            Some(Fault::NegatePhiBlock { alpha: a, torus_block }) if a == alpha && 4 * torus_block < w.len() => {
                for x in &mut w[4 * torus_block..4 * torus_block + 4] {
                    *x = -*x;
                }
            }
            _ => {}
        }
        AmbientVector { u, w }
    }

    pub fn eta_at<T: Scalar>(&self, alpha: Alpha, y: &AmbientPoint<T>, v: &AmbientVector<T>) -> T {
        v.dot(&self.reeb_at(alpha, y))
    }

    /// Product metric `g = g' + g''`.
    pub fn metric<T: Scalar>(&self, a: &AmbientVector<T>, b: &AmbientVector<T>) -> T {
        a.dot(b)
    }

    /// Fundamental 2-form `Φ_α(X, Y) = g(X, φ_α Y)`.
    pub fn fundamental_at<T: Scalar>(
        &self,
        alpha: Alpha,
        y: &AmbientPoint<T>,
        a: &AmbientVector<T>,
        b: &AmbientVector<T>,
    ) -> T {
        self.metric(a, &self.phi_at(alpha, y, b))
    }

    /// `ξ_α = -J_α N` at `p`.
    pub fn sphere_reeb(&self, alpha: Alpha, p: &ProductPoint) -> TangentVector {
        self.reeb_at(alpha, &p.ambient())
    }

    /// `φ_α X` at `p`; `X` must be tangent.
    pub fn phi(&self, alpha: Alpha, p: &ProductPoint, x: &TangentVector) -> Result<TangentVector> {
        self.check_point(p)?;
        self.check_tangent(p, x)?;
        Ok(self.phi_at(alpha, &p.ambient(), x))
    }

    /// `η_α(X) = g(X, ξ_α)` at `p`.
    pub fn eta(&self, alpha: Alpha, p: &ProductPoint, x: &TangentVector) -> f64 {
        self.eta_at(alpha, &p.ambient(), x)
    }

    pub(crate) fn check_tangent(&self, p: &ProductPoint, x: &TangentVector) -> Result<()> {
        if x.u.len() != self.sphere_len() || x.w.len() != self.torus_len() {
            return Err(Error::DimensionMismatch {
                expected: self.sphere_len() + self.torus_len(),
                found: x.u.len() + x.w.len(),
            });
        }
        let r = x.normal_component(p);
        if r > TANGENCY_TOL.max(1e-10) * x.norm().max(1.0) {
            return Err(Error::NotTangent { residual: r });
        }
        Ok(())
    }
}
