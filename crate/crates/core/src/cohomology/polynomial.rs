use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Polynomial in `t` with nonnegative integer coefficients, lowest degree
/// first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<u64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Rejects negative coefficients.
    pub fn from_signed(coeffs: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(coeffs.len());
        for (degree, &value) in coeffs.iter().enumerate() {
            if value < 0 {
                return Err(Error::NegativeCoefficient { degree, value });
            }
            out.push(value as u64);
        }
        Ok(Self::new(out))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![1])
    }

    pub fn monomial(degree: usize, c: u64) -> Self {
        let mut v = vec![0; degree + 1];
        v[degree] = c;
        Self::new(v)
    }

    /// `1 + t^d`, the Poincaré polynomial of a homology `d`-sphere.
    pub fn one_plus_t_pow(d: usize) -> Self {
        &Self::one() + &Self::monomial(d, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, d: usize) -> u64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Value at an integer, e.g. `t = -1` for the Euler characteristic.
    pub fn eval(&self, t: i64) -> i128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * t as i128 + c as i128)
    }

    /// Coefficient-wise `self ≤ other`.
    pub fn leq(&self, other: &Self) -> bool {
        (0..self.coeffs.len()).all(|d| self.coeff(d) <= other.coeff(d))
    }

    /// `self ≤ other` and `self ≠ other`.
    pub fn lt(&self, other: &Self) -> bool {
        self.leq(other) && self != other
    }

    /// The partial order as an `Option<Ordering>`; `None` when incomparable.
    pub fn partial_cmp_coeffwise(&self, other: &Self) -> Option<Ordering> {
        match (self.leq(other), other.leq(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    /// Exact quotient by `divisor` if the division leaves no remainder and
    /// the quotient has nonnegative coefficients.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        let lead = divisor.coeff(dd) as i128;
        let mut rem: Vec<i128> = self.coeffs.iter().map(|&c| c as i128).collect();
        if rem.len() <= dd {
            return if self.is_zero() { Some(Self::zero()) } else { None };
        }
        let mut quot = vec![0i128; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd];
            if c % lead != 0 {
                return None;
            }
            let qk = c / lead;
            quot[k] = qk;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= qk * dc as i128;
            }
        }
        if rem.iter().any(|&r| r != 0) || quot.iter().any(|&c| c < 0) {
            return None;
        }
        Some(Self::new(quot.into_iter().map(|c| c as u64).collect()))
    }

    /// `1+4t^2+t^4`: no spaces, for factored output.
    pub fn to_compact_string(&self) -> String {
        self.render("+")
    }

    fn render(&self, sep: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(d, &c)| match (d, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}t"),
                (d, 1) => format!("t^{d}"),
                (d, c) => format!("{c}t^{d}"),
            })
            .collect();
        terms.join(sep)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(" + "))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new(
            (0..n)
                .map(|d| self.coeff(d).checked_add(o.coeff(d)).expect("coefficient overflow"))
                .collect(),
        )
    }
}

/// Exact convolution.
impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).expect("coefficient overflow");
                out[i + j] = out[i + j].checked_add(term).expect("coefficient overflow");
            }
        }
        IntPolynomial::new(out)
    }
}

/// Coefficients travel as decimal strings so no JSON consumer rounds them.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(u64::to_string).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| s.parse::<u64>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}
