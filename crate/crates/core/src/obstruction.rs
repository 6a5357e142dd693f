//! Betti-number obstruction to splitting `M_{l,m}` as a global product of a
//! compact 3-Sasakian and a compact hyper-Kähler manifold.
//!
//! If `P = P' · P''` with `P'` the Poincaré polynomial of a compact orientable
//! `d`-manifold, then `P' ≥ 1 + t^d` coefficient-wise, hence
//! `P ≥ (1 + t^d) · P''`. A candidate `P''` for which this lower bound is not
//! below `P` at some degree is ruled out, and the degree where the bound
//! overshoots is the witness. The argument is one-directional: surviving
//! candidates make the verdict inconclusive, never a proof of a splitting.

use serde::{Deserialize, Serialize};

use crate::cohomology::{poincare_polynomial, IntPolynomial};
use crate::error::{Error, Result};

pub fn poly_leq(p: &IntPolynomial, q: &IntPolynomial) -> bool {
    p.leq(q)
}

pub fn poly_lt(p: &IntPolynomial, q: &IntPolynomial) -> bool {
    p.lt(q)
}

pub fn poly_mul(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    p * q
}

/// A possible Poincaré polynomial for one factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateFactor {
    pub name: String,
    pub polynomial: IntPolynomial,
}

impl CandidateFactor {
    pub fn new(name: impl Into<String>, polynomial: IntPolynomial) -> Self {
        Self {
            name: name.into(),
            polynomial,
        }
    }

    /// `1 + 22t^2 + t^4`.
    pub fn k3() -> Self {
        Self::new("K3", IntPolynomial::new(vec![1, 0, 22, 0, 1]))
    }

    /// `(1 + t)^n`, the flat `n`-torus.
    pub fn torus(n: usize) -> Self {
        let lin = IntPolynomial::new(vec![1, 1]);
        let p = (0..n).fold(IntPolynomial::one(), |acc, _| &acc * &lin);
        Self::new(format!("T{n}"), p)
    }

    /// `1 + t^d`: the smallest Poincaré polynomial of a compact orientable
    /// connected `d`-manifold.
    pub fn lower_bound(d: usize) -> Self {
        Self::new(format!("LowerBound{d}"), IntPolynomial::one_plus_t_pow(d))
    }
}

/// The compact 4-dimensional hyper-Kähler manifolds: a K3 surface or a 4-torus.
pub fn four_dimensional_hyperkahler() -> Vec<CandidateFactor> {
    vec![CandidateFactor::k3(), CandidateFactor::torus(4)]
}

/// Products `K3^a × T^{4(m-a)}`, used as stand-ins when `m > 1`.
pub fn product_hyperkahler_candidates(m: usize) -> Vec<CandidateFactor> {
    if m == 1 {
        return four_dimensional_hyperkahler();
    }
    (0..=m)
        .map(|a| {
            let k3 = CandidateFactor::k3().polynomial;
            let mut p = (0..a).fold(IntPolynomial::one(), |acc, _| &acc * &k3);
            p = &p * &CandidateFactor::torus(4 * (m - a)).polynomial;
            let k3_part = if a == 1 { "K3".to_string() } else { format!("K3^{a}") };
            let name = match (a, m - a) {
                (0, b) => format!("T{}", 4 * b),
                (_, 0) => k3_part,
                (_, b) => format!("{k3_part}xT{}", 4 * b),
            };
            CandidateFactor::new(name, p)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NotProduct,
    Inconclusive,
}

/// Coefficient where the lower bound exceeds `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub degree: usize,
    /// Coefficient of `(1 + t^d) P''` at `degree`.
    #[serde(with = "u64_string")]
    pub bound: u64,
    /// Coefficient of `P` at `degree`.
    #[serde(with = "u64_string")]
    pub actual: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateOutcome {
    pub candidate: CandidateFactor,
    /// `(1 + t^d) · P''`.
    pub lower_bound: IntPolynomial,
    pub bound_below_p: bool,
    /// Lowest degree at which the bound overshoots, if any.
    pub witness: Option<Witness>,
    /// When `P = (1 + t^d) Q`: whether `P'' > Q`, the strict form of the
    /// same contradiction.
    pub exceeds_quotient: Option<bool>,
    pub ruled_out: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionVerdict {
    pub verdict: Verdict,
    pub poincare: IntPolynomial,
    pub sasakian_dim: usize,
    /// `P / (1 + t^d)` when the division is exact.
    pub quotient: Option<IntPolynomial>,
    pub candidates: Vec<CandidateOutcome>,
    /// Set when the verdict is for an `(l, m)` other than `(1, 1)`, where the
    /// hyper-Kähler candidate list is a stand-in rather than a classification.
    pub extrapolation: bool,
    pub notes: Vec<String>,
}

/// Runs the coefficient comparison for every hyper-Kähler candidate.
pub fn nonproduct_obstruction(
    p: &IntPolynomial,
    sasakian_dim: usize,
    candidates: &[CandidateFactor],
) -> Result<ObstructionVerdict> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if sasakian_dim.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "3-Sasakian dimension must be odd, got {sasakian_dim}"
        )));
    }
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let sphere_bound = IntPolynomial::one_plus_t_pow(sasakian_dim);
    let quotient = p.exact_div(&sphere_bound);
    let outcomes: Vec<CandidateOutcome> = candidates
        .iter()
        .map(|c| {
            let lower_bound = poly_mul(&sphere_bound, &c.polynomial);
            let bound_below_p = poly_leq(&lower_bound, p);
            let witness = (0..=lower_bound.degree().unwrap_or(0))
                .find(|&d| lower_bound.coeff(d) > p.coeff(d))
                .map(|d| Witness {
                    degree: d,
                    bound: lower_bound.coeff(d),
                    actual: p.coeff(d),
                });
            let exceeds_quotient = quotient.as_ref().map(|q| poly_lt(q, &c.polynomial));
            CandidateOutcome {
                candidate: c.clone(),
                lower_bound,
                bound_below_p,
                ruled_out: witness.is_some(),
                witness,
                exceeds_quotient,
            }
        })
        .collect();
    let verdict = if outcomes.iter().all(|o| o.ruled_out) {
        Verdict::NotProduct
    } else {
        Verdict::Inconclusive
    };
    let notes = vec![format!(
        "the bound 1+t^{sasakian_dim} is applied to the {sasakian_dim}-dimensional 3-Sasakian factor P'; \
         the candidates are Poincaré polynomials of the hyper-Kähler factor P''"
    )];
    Ok(ObstructionVerdict {
        verdict,
        poincare: p.clone(),
        sasakian_dim,
        quotient,
        candidates: outcomes,
        extrapolation: false,
        notes,
    })
}

/// The full pipeline for `M_{l,m}`: Betti numbers, then the obstruction
/// against the hyper-Kähler candidates of dimension `4m`.
pub fn obstruction_for(l: usize, m: usize) -> Result<ObstructionVerdict> {
    let p = poincare_polynomial(l, m)?;
    let mut v = nonproduct_obstruction(&p, 4 * l + 3, &product_hyperkahler_candidates(m))?;
    if (l, m) != (1, 1) {
        v.extrapolation = true;
        v.notes.push(format!(
            "(l, m) = ({l}, {m}): only (1, 1) is covered by the classification of compact 4-dimensional \
             hyper-Kähler manifolds; other cases compare against K3/torus products and are extrapolation"
        ));
    }
    Ok(v)
}

mod u64_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
