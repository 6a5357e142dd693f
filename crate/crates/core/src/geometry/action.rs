//! The `Z_4` action generated by right multiplication with `i`: `f` on the
//! sphere factor, `h` on the torus, and the diagonal action on the product.

use serde::{Deserialize, Serialize};

use super::point::{ProductPoint, TangentVector, TorusAngle};
use crate::quatlin::{apply_unit, IntMatrix, Side, UnitQuaternion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `f`: right multiplication by `i` on `S^{4l+3}`, identity on the torus.
    Sphere,
    /// `h`: right multiplication by `i` on `T^{4m}`, identity on the sphere.
    Torus,
    /// `(f, h)` acting on both factors.
    Diagonal,
}

impl Generator {
    fn acts_on_sphere(self) -> bool {
        matches!(self, Generator::Sphere | Generator::Diagonal)
    }

    fn acts_on_torus(self) -> bool {
        matches!(self, Generator::Torus | Generator::Diagonal)
    }

    /// One application of the generator.
    pub fn apply(self, p: &ProductPoint) -> ProductPoint {
        let s = if self.acts_on_sphere() {
            apply_unit(Side::Right, UnitQuaternion::I, p.sphere())
        } else {
            p.sphere().to_vec()
        };
        let t = if self.acts_on_torus() {
            right_i_on_torus(p.torus())
        } else {
            p.torus().to_vec()
        };
        ProductPoint::from_parts_exact(s, t)
    }

    /// `k`-fold composite.
    pub fn apply_times(self, k: u32, p: &ProductPoint) -> ProductPoint {
        (0..k).fold(p.clone(), |q, _| self.apply(&q))
    }

    /// The differential. All three maps are restrictions of linear maps, so
    /// the pushforward is the same linear map on ambient vectors.
    pub fn pushforward(self, v: &TangentVector) -> TangentVector {
        TangentVector {
            u: if self.acts_on_sphere() {
                apply_unit(Side::Right, UnitQuaternion::I, &v.u)
            } else {
                v.u.clone()
            },
            w: if self.acts_on_torus() {
                apply_unit(Side::Right, UnitQuaternion::I, &v.w)
            } else {
                v.w.clone()
            },
        }
    }
}

/// `x ↦ x·i` on torus coordinates, exact modulo 1.
fn right_i_on_torus(t: &[TorusAngle]) -> Vec<TorusAngle> {
    if t.is_empty() {
        return Vec::new();
    }
    let r = crate::quatlin::right_mult_matrix(UnitQuaternion::I, t.len() / 4).expect("m >= 1");
    apply_signed_permutation(&r, t)
}

fn apply_signed_permutation(r: &IntMatrix, t: &[TorusAngle]) -> Vec<TorusAngle> {
    (0..r.dim())
        .map(|row| {
            (0..r.dim()).fold(TorusAngle::ZERO, |acc, col| match r.get(row, col) {
                0 => acc,
                1 => acc.wrapping_add(t[col]),
                -1 => acc.wrapping_add(t[col].wrapping_neg()),
                other => unreachable!("unit quaternion matrices have entries in {{-1,0,1}}, got {other}"),
            })
        })
        .collect()
}

pub fn action_f(p: &ProductPoint) -> ProductPoint {
    Generator::Sphere.apply(p)
}

pub fn action_h(p: &ProductPoint) -> ProductPoint {
    Generator::Torus.apply(p)
}

pub fn action_diag(k: u32, p: &ProductPoint) -> ProductPoint {
    Generator::Diagonal.apply_times(k, p)
}
