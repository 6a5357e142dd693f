//! Exact invariant cohomology of the `Z_4` quotient `M_{l,m}`.
//!
//! `H^*(T^{4m}) = Λ^* H^1(T^{4m})` and the generator acts on `H^1` by the
//! pullback `h^*`, so the invariant part of `H^k(T^{4m})` is the fixed space
//! of `Λ^k h^*`. The sphere contributes `H^0` and `H^{4l+3}`, each a
//! one-dimensional character of `Z_4`; Künneth then assembles `H^*(M_{l,m})`.

mod exterior;
mod polynomial;
mod rational;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use exterior::{exterior_power, wedge_basis};
pub use polynomial::IntPolynomial;
pub use rational::RationalMatrix;

use crate::error::{Error, Result};
use crate::quatlin::{right_mult_matrix, UnitQuaternion};

/// Largest multiplicative order searched before declaring a matrix of
/// infinite order.
pub const MAX_ORDER: u32 = 64;

/// Matrix of `h^*` on `H^1(T^{4m})` in the basis `[θ_1], [θ_i], [θ_j], [θ_k]`
/// per block. `h^* θ_a = θ_a ∘ dh = Σ_b R_{ab} θ_b` for the point map
/// `R = R_i`, so in column convention the matrix is `R^T`.
pub fn induced_h_star(m: usize) -> Result<RationalMatrix> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let r = right_mult_matrix(UnitQuaternion::I, m)?;
    Ok(RationalMatrix::from_int_matrix(&r).transpose())
}

/// Smallest `d ≥ 1` with `M^d = I`.
pub fn multiplicative_order(m: &RationalMatrix) -> Result<u32> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let mut power = m.clone();
    for d in 1..=MAX_ORDER {
        if power.is_identity() {
            return Ok(d);
        }
        power = &power * m;
    }
    Err(Error::NotFiniteOrder { bound: MAX_ORDER })
}

fn signed(m: &RationalMatrix, sign: i8) -> RationalMatrix {
    if sign < 0 {
        -m
    } else {
        m.clone()
    }
}

/// Dimension of the fixed space of `Λ^k M`, i.e. of the invariants of the
/// cyclic group generated by `M` on `Λ^k`.
pub fn invariant_dimension(m: &RationalMatrix, k: usize) -> Result<usize> {
    twisted_invariant_dimension(m, k, 1)
}

/// Invariants of `sign · Λ^k M`: the degree-`k` part of `(L ⊗ Λ^*)^G` where
/// the generator acts on the line `L` by `sign`.
pub fn twisted_invariant_dimension(m: &RationalMatrix, k: usize, sign: i8) -> Result<usize> {
    multiplicative_order(m)?;
    let wedge = signed(&exterior_power(m, k)?, sign);
    let n = wedge.nrows();
    Ok((&wedge - &RationalMatrix::identity(n)).nullity())
}

/// Same quantity by the group-averaging route: the rank of the projector
/// `(1/d) Σ_j (sign · Λ^k M)^j` over the whole cyclic group of order `d`.
pub fn invariant_dimension_by_averaging(m: &RationalMatrix, k: usize, sign: i8) -> Result<usize> {
    let order = multiplicative_order(m)?;
    // a sign twist can double the order of the acting element
    let order = if sign < 0 && order % 2 == 1 { 2 * order } else { order };
    let n = exterior_power(m, k)?.nrows();
    let mut sum = RationalMatrix::zeros(n, n);
    let mut g = RationalMatrix::identity(m.nrows());
    for j in 0..order {
        let twist = if sign < 0 && j % 2 == 1 { -1 } else { 1 };
        sum = &sum + &signed(&exterior_power(&g, k)?, twist);
        g = &g * m;
    }
    let projector = sum.scale(&BigRational::new(BigInt::from(1), BigInt::from(order)));
    debug_assert!(&projector * &projector == projector, "averaging must give a projector");
    Ok(projector.rank())
}

/// Action of the `Z_4` generator on `H^0` and `H^{4l+3}` of the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereAction {
    pub top_degree: usize,
    pub on_h0: i8,
    pub on_top: i8,
}

/// Sphere characters of `f^power`. `H^0` is always fixed; on the top class
/// the map acts by its degree, which for the restriction of a linear
/// isometry fixing the normal field is the ambient determinant.
pub fn sphere_action_on_cohomology(l: usize, power: u32) -> Result<SphereAction> {
    let r = right_mult_matrix(UnitQuaternion::I, l + 1)?.pow(power);
    let det = r.determinant();
    let on_top = match det {
        1 => 1,
        -1 => -1,
        other => unreachable!("orthogonal integer matrix with determinant {other}"),
    };
    Ok(SphereAction {
        top_degree: 4 * l + 3,
        on_h0: 1,
        on_top,
    })
}

/// Betti numbers of `M_{l,m}` together with the torus invariants they come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientBetti {
    pub l: usize,
    pub m: usize,
    pub sphere: SphereAction,
    /// `dim H^j(T^{4m})^{Z_4}`, `j = 0..=4m`.
    pub torus_invariants: Vec<usize>,
    /// `b_0 .. b_{4(l+m)+3}`.
    pub betti: Vec<usize>,
}

/// Largest torus block count handled by [`quotient_betti`].
pub const MAX_M: usize = 2;
/// Largest sphere index handled by [`quotient_betti`].
pub const MAX_L: usize = 64;

pub fn validate_lm(l: usize, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    // Λ^6 for m = 3 is a 924×924 rational elimination, minutes rather than milliseconds
    if m > MAX_M || l > MAX_L {
        return Err(Error::InvalidParameter(format!(
            "(l, m) = ({l}, {m}) outside the supported range l ≤ {MAX_L}, 1 ≤ m ≤ {MAX_M}"
        )));
    }
    Ok(())
}

/// `b_k = Σ_q dim (H^q(S) ⊗ H^{k-q}(T))^{Z_4}` with `q ∈ {0, 4l+3}`.
pub fn quotient_betti(l: usize, m: usize) -> Result<QuotientBetti> {
    validate_lm(l, m)?;
    let a = induced_h_star(m)?;
    let sphere = sphere_action_on_cohomology(l, 1)?;
    let n = 4 * m;
    let untwisted: Vec<usize> = (0..=n)
        .map(|j| twisted_invariant_dimension(&a, j, sphere.on_h0))
        .collect::<Result<_>>()?;
    let top: Vec<usize> = if sphere.on_top == sphere.on_h0 {
        untwisted.clone()
    } else {
        (0..=n)
            .map(|j| twisted_invariant_dimension(&a, j, sphere.on_top))
            .collect::<Result<_>>()?
    };
    let dim = 4 * (l + m) + 3;
    let betti = (0..=dim)
        .map(|k| {
            let from_h0 = untwisted.get(k).copied().unwrap_or(0);
            let from_top = k
                .checked_sub(sphere.top_degree)
                .and_then(|j| top.get(j).copied())
                .unwrap_or(0);
            from_h0 + from_top
        })
        .collect();
    Ok(QuotientBetti {
        l,
        m,
        sphere,
        torus_invariants: untwisted,
        betti,
    })
}

/// `P(t) = Σ b_k t^k`.
pub fn poincare_polynomial(l: usize, m: usize) -> Result<IntPolynomial> {
    Ok(IntPolynomial::new(
        quotient_betti(l, m)?.betti.into_iter().map(|b| b as u64).collect(),
    ))
}

/// `P = (1 + t^{4l+3}) · P̃` with `P̃` the Poincaré polynomial of the torus
/// invariants. Returns `None` if the product does not reproduce `P`, which
/// happens only when the sphere's top class is not fixed.
pub fn poincare_factors(l: usize, m: usize) -> Result<Option<(IntPolynomial, IntPolynomial)>> {
    let qb = quotient_betti(l, m)?;
    let sphere = IntPolynomial::one_plus_t_pow(qb.sphere.top_degree);
    let torus = IntPolynomial::new(qb.torus_invariants.iter().map(|&b| b as u64).collect());
    let p = IntPolynomial::new(qb.betti.iter().map(|&b| b as u64).collect());
    Ok((&sphere * &torus == p).then_some((sphere, torus)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_multiply_back() {
        let (s, t) = poincare_factors(1, 1).unwrap().unwrap();
        assert_eq!(
            format!("({})({})", s.to_compact_string(), t.to_compact_string()),
            "(1+t^7)(1+4t^2+t^4)"
        );
        let (s, t) = poincare_factors(2, 2).unwrap().unwrap();
        assert_eq!(&s * &t, poincare_polynomial(2, 2).unwrap());
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn printed_a() -> RationalMatrix {
        RationalMatrix::from_i64_rows(&[vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, -1], vec![0, 0, 1, 0]])
    }

    #[test]
    fn h_star_matches_the_printed_matrix() {
        let a = induced_h_star(1).unwrap();
        assert_eq!(a, printed_a());
        assert_eq!(a.pow(2), -&RationalMatrix::identity(4));
        assert!(a.pow(4).is_identity());
        assert_eq!(multiplicative_order(&a).unwrap(), 4);
        // (t^2 + 1)^2 = 1 + 2t^2 + t^4
        assert_eq!(a.characteristic_polynomial(), vec![q(1), q(0), q(2), q(0), q(1)]);
    }

    #[test]
    fn h_star_is_blockwise() {
        let a2 = induced_h_star(2).unwrap();
        assert_eq!(a2, printed_a().direct_sum(&printed_a()));
        assert!(induced_h_star(0).is_err());
    }

    #[test]
    fn top_wedge_of_a_is_det() {
        let top = exterior_power(&printed_a(), 4).unwrap();
        assert_eq!(top, RationalMatrix::identity(1));
    }

    #[test]
    fn second_wedge_in_symmetrized_basis() {
        // Columns: θ1∧θi, θ1∧θj ± θi∧θk, θ1∧θk ± θi∧θj, θj∧θk in the
        // lexicographic basis (01, 02, 03, 12, 13, 23).
        let b = RationalMatrix::from_i64_rows(&[
            vec![1, 0, 0, 0, 0, 0],
            vec![0, 1, 1, 0, 0, 0],
            vec![0, 0, 0, 1, 1, 0],
            vec![0, 0, 0, 1, -1, 0],
            vec![0, 1, -1, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 1],
        ]);
        let w = exterior_power(&printed_a(), 2).unwrap();
        let d = &(&b.inverse().unwrap() * &w) * &b;
        let diag: Vec<i64> = vec![1, -1, 1, 1, -1, 1];
        let expected = RationalMatrix::from_fn(6, 6, |r, c| if r == c { q(diag[r]) } else { q(0) });
        assert_eq!(d, expected);
    }

    #[test]
    fn invariant_dimensions_for_one_block() {
        let a = induced_h_star(1).unwrap();
        let dims: Vec<usize> = (0..=4).map(|k| invariant_dimension(&a, k).unwrap()).collect();
        assert_eq!(dims, vec![1, 0, 4, 0, 1]);
        for k in 0..=4 {
            assert_eq!(invariant_dimension_by_averaging(&a, k, 1).unwrap(), dims[k]);
        }
    }

    #[test]
    fn trivial_action_fixes_everything() {
        let id = RationalMatrix::identity(4);
        let binom = [1, 4, 6, 4, 1];
        for k in 0..=4 {
            assert_eq!(invariant_dimension(&id, k).unwrap(), binom[k]);
        }
    }

    #[test]
    fn two_blocks_against_frozen_projector_oracle() {
        // Frozen from an independent sympy run: rank of (1/4) Σ_g Λ^k(g)
        // over g ∈ {I, A⊕A, (A⊕A)^2, (A⊕A)^3}.
        let a = induced_h_star(2).unwrap();
        assert_eq!(invariant_dimension(&a, 2).unwrap(), 16);
        let dims: Vec<usize> = (0..=8).map(|k| invariant_dimension(&a, k).unwrap()).collect();
        assert_eq!(dims, vec![1, 0, 16, 0, 38, 0, 16, 0, 1]);
    }

    #[test]
    fn infinite_order_is_rejected() {
        let shear = RationalMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(
            invariant_dimension(&shear, 1),
            Err(Error::NotFiniteOrder { bound: MAX_ORDER })
        );
    }

    #[test]
    fn sphere_characters_are_trivial() {
        for l in 0..=3 {
            for power in 1..=3 {
                let s = sphere_action_on_cohomology(l, power).unwrap();
                assert_eq!((s.on_h0, s.on_top, s.top_degree), (1, 1, 4 * l + 3));
            }
        }
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(
            quotient_betti(1, 1).unwrap().betti,
            vec![1, 0, 4, 0, 1, 0, 0, 1, 0, 4, 0, 1]
        );
        assert_eq!(
            quotient_betti(1, 2).unwrap().betti,
            vec![1, 0, 16, 0, 38, 0, 16, 1, 1, 16, 0, 38, 0, 16, 0, 1]
        );
        assert_eq!(quotient_betti(0, 1).unwrap().betti, vec![1, 0, 4, 1, 1, 4, 0, 1]);
        let b = quotient_betti(1, 1).unwrap().betti;
        assert!((0..b.len()).all(|k| b[k] == b[b.len() - 1 - k]));
        assert!(quotient_betti(1, 0).is_err());
    }

    #[test]
    fn poincare_polynomial_and_euler_characteristic() {
        let p = poincare_polynomial(1, 1).unwrap();
        assert_eq!(p.to_string(), "1 + 4t^2 + t^4 + t^7 + 4t^9 + t^11");
        let factored = &IntPolynomial::one_plus_t_pow(7) * &IntPolynomial::new(vec![1, 0, 4, 0, 1]);
        assert_eq!(p, factored);
        for (l, m) in [(0, 1), (1, 1), (1, 2), (2, 1)] {
            assert_eq!(poincare_polynomial(l, m).unwrap().eval(-1), 0);
        }
    }
}
