//! Quaternion arithmetic and the quaternionic operators on `R^{4k}`.
//!
//! A vector of `R^{4k}` is read as `k` quaternions, each stored in the basis
//! order `(1, i, j, k)`. Left multiplication by `i`, `j`, `k` gives the
//! standard hypercomplex structure `J_1, J_2, J_3`; right multiplication by
//! `i` is the generator of the `Z_4` action.
//!
//! The exact path only knows the eight units `±1, ±i, ±j, ±k` and produces
//! integer matrices with entries in `{-1, 0, 1}`. Floating operators are
//! derived from those by linearity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A quaternion `w + x i + y j + z k` over any ring-like scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T> Quaternion<T> {
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }
}

impl<T: Copy> Quaternion<T> {
    pub fn to_array(self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_slice(c: &[T]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

impl<T: Copy + Neg<Output = T>> Quaternion<T> {
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }
}

impl<T> Quaternion<T>
where
    T: Copy + Add<Output = T> + Mul<Output = T>,
{
    pub fn norm_sqr(self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }
}

impl Quaternion<f64> {
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

impl<T: Add<Output = T>> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Sub<Output = T>> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Neg<Output = T>> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl<T> Mul for Quaternion<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.w, o.x, o.y, o.z);
        Self::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

/// One of the basis directions `1, i, j, k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    One,
    I,
    J,
    K,
}

/// One of the eight units `±1, ±i, ±j, ±k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitQuaternion {
    pub negative: bool,
    pub basis: Basis,
}

impl UnitQuaternion {
    pub const ONE: Self = Self::pos(Basis::One);
    pub const I: Self = Self::pos(Basis::I);
    pub const J: Self = Self::pos(Basis::J);
    pub const K: Self = Self::pos(Basis::K);

    pub const fn pos(basis: Basis) -> Self {
        Self { negative: false, basis }
    }

    pub const fn neg(basis: Basis) -> Self {
        Self { negative: true, basis }
    }

    /// All eight units, positive ones first.
    pub fn all() -> [Self; 8] {
        use Basis::*;
        [
            Self::pos(One),
            Self::pos(I),
            Self::pos(J),
            Self::pos(K),
            Self::neg(One),
            Self::neg(I),
            Self::neg(J),
            Self::neg(K),
        ]
    }

    /// The unit `J_alpha` for `alpha` in `1..=3` (`i`, `j`, `k`).
    pub fn structure(alpha: usize) -> Result<Self> {
        match alpha {
            1 => Ok(Self::I),
            2 => Ok(Self::J),
            3 => Ok(Self::K),
            _ => Err(Error::InvalidIndex {
                what: "alpha",
                value: alpha as i64,
            }),
        }
    }

    pub fn to_quaternion<T: Copy + Zero + One + Neg<Output = T>>(self) -> Quaternion<T> {
        let s = if self.negative { -T::one() } else { T::one() };
        let z = T::zero();
        match self.basis {
            Basis::One => Quaternion::new(s, z, z, z),
            Basis::I => Quaternion::new(z, s, z, z),
            Basis::J => Quaternion::new(z, z, s, z),
            Basis::K => Quaternion::new(z, z, z, s),
        }
    }

    /// Recognise an integer quaternion as one of the eight units.
    pub fn from_quaternion(q: Quaternion<i64>) -> Option<Self> {
        let c = q.to_array();
        let nonzero: Vec<usize> = (0..4).filter(|&i| c[i] != 0).collect();
        if nonzero.len() != 1 || c[nonzero[0]].abs() != 1 {
            return None;
        }
        let basis = [Basis::One, Basis::I, Basis::J, Basis::K][nonzero[0]];
        Some(Self {
            negative: c[nonzero[0]] < 0,
            basis,
        })
    }

    /// Integer power, staying inside the unit group.
    pub fn pow(self, k: u32) -> Self {
        let mut acc = Quaternion::<i64>::new(1, 0, 0, 0);
        let q = self.to_quaternion::<i64>();
        for _ in 0..k {
            acc = acc * q;
        }
        Self::from_quaternion(acc).expect("unit group is closed under products")
    }
}

impl fmt::Display for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.basis {
            Basis::One => "1",
            Basis::I => "i",
            Basis::J => "j",
            Basis::K => "k",
        };
        write!(f, "{}{}", if self.negative { "-" } else { "" }, b)
    }
}

impl std::str::FromStr for UnitQuaternion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (negative, rest) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let basis = match rest {
            "1" => Basis::One,
            "i" => Basis::I,
            "j" => Basis::J,
            "k" => Basis::K,
            _ => return Err(Error::NotAUnit(s.to_string())),
        };
        Ok(Self { negative, basis })
    }
}

/// Dense square integer matrix used for the exact operators.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix({}x{})", self.n, self.n)?;
        for r in 0..self.n {
            writeln!(f, "  {:?}", &self.data[r * self.n..(r + 1) * self.n])?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { n, data: rows.concat() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.n + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| &acc * self)
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// Orthogonality over the integers: `M^T M = I`.
    pub fn is_orthogonal(&self) -> bool {
        &self.transpose() * self == Self::identity(self.n)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination in `i128`.
    pub fn determinant(&self) -> i128 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| self.get(r, c) as f64)
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * o.get(k, c);
                }
            }
        }
        out
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, o.n);
        IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, o.n);
        IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            n: self.n,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

/// Which side the quaternion multiplies from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A linear operator on `R^{4k}` built from quaternion multiplications.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AmbientOperator {
    Identity {
        blocks: usize,
    },
    Mult {
        side: Side,
        unit: UnitQuaternion,
        blocks: usize,
    },
    /// `outer ∘ inner`
    Compose(Box<AmbientOperator>, Box<AmbientOperator>),
}

impl AmbientOperator {
    pub fn blocks(&self) -> usize {
        match self {
            Self::Identity { blocks } | Self::Mult { blocks, .. } => *blocks,
            Self::Compose(a, _) => a.blocks(),
        }
    }

    pub fn then(self, outer: AmbientOperator) -> Self {
        Self::Compose(Box::new(outer), Box::new(self))
    }

    pub fn matrix(&self) -> Result<IntMatrix> {
        match self {
            Self::Identity { blocks } => Ok(IntMatrix::identity(4 * blocks)),
            Self::Mult {
                side: Side::Left,
                unit,
                blocks,
            } => left_mult_matrix(*unit, *blocks),
            Self::Mult {
                side: Side::Right,
                unit,
                blocks,
            } => right_mult_matrix(*unit, *blocks),
            Self::Compose(outer, inner) => {
                if outer.blocks() != inner.blocks() {
                    return Err(Error::DimensionMismatch {
                        expected: 4 * outer.blocks(),
                        found: 4 * inner.blocks(),
                    });
                }
                Ok(&outer.matrix()? * &inner.matrix()?)
            }
        }
    }
}

fn mult_matrix(side: Side, q: UnitQuaternion, blocks: usize) -> Result<IntMatrix> {
    if blocks == 0 {
        return Err(Error::InvalidIndex {
            what: "block count",
            value: 0,
        });
    }
    let q = q.to_quaternion::<i64>();
    let mut block = IntMatrix::zeros(4);
    for c in 0..4 {
        let mut e = [0i64; 4];
        e[c] = 1;
        let x = Quaternion::from_slice(&e);
        let image = match side {
            Side::Left => q * x,
            Side::Right => x * q,
        };
        for (r, v) in image.to_array().into_iter().enumerate() {
            block.set(r, c, v);
        }
    }
    let mut m = IntMatrix::zeros(4 * blocks);
    for b in 0..blocks {
        for r in 0..4 {
            for c in 0..4 {
                m.set(4 * b + r, 4 * b + c, block.get(r, c));
            }
        }
    }
    Ok(m)
}

/// Matrix of `x ↦ q·x` applied blockwise on `R^{4k}`.
pub fn left_mult_matrix(q: UnitQuaternion, blocks: usize) -> Result<IntMatrix> {
    mult_matrix(Side::Left, q, blocks)
}

/// Matrix of `x ↦ x·q` applied blockwise on `R^{4k}`.
pub fn right_mult_matrix(q: UnitQuaternion, blocks: usize) -> Result<IntMatrix> {
    mult_matrix(Side::Right, q, blocks)
}

/// Parse a unit symbol and build the left multiplication matrix.
pub fn left_mult_matrix_str(symbol: &str, blocks: usize) -> Result<IntMatrix> {
    left_mult_matrix(symbol.parse()?, blocks)
}

/// Parse a unit symbol and build the right multiplication matrix.
pub fn right_mult_matrix_str(symbol: &str, blocks: usize) -> Result<IntMatrix> {
    right_mult_matrix(symbol.parse()?, blocks)
}

/// Floating left/right multiplication by an arbitrary quaternion, as a linear
/// combination of the exact unit matrices.
pub fn mult_matrix_f64(side: Side, q: Quaternion<f64>, blocks: usize) -> Result<DMatrix<f64>> {
    let units = [
        UnitQuaternion::ONE,
        UnitQuaternion::I,
        UnitQuaternion::J,
        UnitQuaternion::K,
    ];
    let mut out = DMatrix::zeros(4 * blocks, 4 * blocks);
    for (coef, u) in q.to_array().into_iter().zip(units) {
        out += mult_matrix(side, u, blocks)?.to_f64() * coef;
    }
    Ok(out)
}

/// `L_{J_alpha} R_i - R_i L_{J_alpha}` for each alpha, exactly.
pub fn commutators_exact(blocks: usize) -> Result<[IntMatrix; 3]> {
    let r = right_mult_matrix(UnitQuaternion::I, blocks)?;
    let mut out = Vec::with_capacity(3);
    for alpha in 1..=3 {
        let l = left_mult_matrix(UnitQuaternion::structure(alpha)?, blocks)?;
        out.push(&(&l * &r) - &(&r * &l));
    }
    Ok(out.try_into().expect("three commutators"))
}

/// Max Frobenius norm of `L_{J_alpha} R_i - R_i L_{J_alpha}` over alpha.
///
/// The exact path is always `0`.
pub fn commutation_check(blocks: usize) -> Result<f64> {
    let worst = commutators_exact(blocks)?
        .iter()
        .map(|c| c.to_f64().norm())
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Floating variant: `‖L_p R_q - R_q L_p‖` for arbitrary quaternions `p`, `q`.
pub fn commutation_residual_f64(p: Quaternion<f64>, q: Quaternion<f64>, blocks: usize) -> Result<f64> {
    let l = mult_matrix_f64(Side::Left, p, blocks)?;
    let r = mult_matrix_f64(Side::Right, q, blocks)?;
    Ok((&l * &r - &r * &l).norm())
}

/// Apply `x ↦ q·x` (or `x·q`) blockwise to a slice of any scalar type.
pub fn apply_unit<T>(side: Side, q: UnitQuaternion, v: &[T]) -> Vec<T>
where
    T: Copy + Zero + One + Neg<Output = T> + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    debug_assert_eq!(v.len() % 4, 0);
    let q = q.to_quaternion::<T>();
    let mut out = Vec::with_capacity(v.len());
    for chunk in v.chunks_exact(4) {
        let x = Quaternion::from_slice(chunk);
        let y = match side {
            Side::Left => q * x,
            Side::Right => x * q,
        };
        out.extend_from_slice(&y.to_array());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: i64, x: i64, y: i64, z: i64) -> Quaternion<i64> {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn hamilton_relations() {
        let (one, i, j, k) = (q(1, 0, 0, 0), q(0, 1, 0, 0), q(0, 0, 1, 0), q(0, 0, 0, 1));
        assert_eq!(i * i, -one);
        assert_eq!(j * j, -one);
        assert_eq!(k * k, -one);
        assert_eq!(i * j * k, -one);
        assert_eq!(j * i, -k);
        assert_eq!(k * i, j);
    }

    #[test]
    fn left_i_maps_one_to_i() {
        let m = left_mult_matrix(UnitQuaternion::I, 1).unwrap();
        assert_eq!(m.apply(&[1, 0, 0, 0]), vec![0, 1, 0, 0]);
        assert_eq!(&m * &m, -&IntMatrix::identity(4));
    }

    #[test]
    fn j_times_i_is_minus_k() {
        // ji = -k. Columns of L_k by hand: k·1 = k, k·i = j, k·j = -i, k·k = -1.
        let lj = left_mult_matrix(UnitQuaternion::J, 2).unwrap();
        let li = left_mult_matrix(UnitQuaternion::I, 2).unwrap();
        let lk = left_mult_matrix(UnitQuaternion::K, 2).unwrap();
        assert!((&(&lj * &li) + &lk).is_zero());
        let hand = IntMatrix::from_rows(&[vec![0, 0, 0, -1], vec![0, 0, -1, 0], vec![0, 1, 0, 0], vec![1, 0, 0, 0]]);
        let lk1 = left_mult_matrix(UnitQuaternion::K, 1).unwrap();
        assert_eq!(lk1, hand);
    }

    #[test]
    fn right_i_on_j_is_minus_k() {
        let m = right_mult_matrix(UnitQuaternion::I, 1).unwrap();
        assert_eq!(m.apply(&[0, 0, 1, 0]), vec![0, 0, 0, -1]);
        for k in 1..=3 {
            let r = right_mult_matrix(UnitQuaternion::I, k).unwrap();
            assert_eq!(r.pow(4), IntMatrix::identity(4 * k));
            assert_eq!(r.pow(2), -&IntMatrix::identity(4 * k));
        }
    }

    #[test]
    fn right_i_determinant_by_cofactors() {
        // Cofactor expansion of [[0,-1,0,0],[1,0,0,0],[0,0,0,1],[0,0,-1,0]]
        // along the first row: -(-1) * det[[1,0,0],[0,0,1],[0,-1,0]] = 1 * 1.
        let m = right_mult_matrix(UnitQuaternion::I, 1).unwrap();
        assert_eq!(
            m.rows(),
            vec![vec![0, -1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]]
        );
        assert_eq!(m.determinant(), 1);
    }

    #[test]
    fn even_permutations_compose() {
        for blocks in 1..=3 {
            let l = |a| left_mult_matrix(UnitQuaternion::structure(a).unwrap(), blocks).unwrap();
            for (a, b, c) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
                assert_eq!(&l(a) * &l(b), l(c));
            }
            for a in 1..=3 {
                assert_eq!(&l(a) * &l(a), -&IntMatrix::identity(4 * blocks));
            }
        }
    }

    #[test]
    fn unit_matrices_are_special_orthogonal() {
        for u in UnitQuaternion::all() {
            for side in [Side::Left, Side::Right] {
                let m = mult_matrix(side, u, 2).unwrap();
                assert!(m.is_orthogonal(), "{side:?} {u}");
                assert_eq!(m.determinant(), 1, "{side:?} {u}");
            }
        }
    }

    #[test]
    fn commutation_is_exactly_zero() {
        for k in 1..=3 {
            assert!(commutators_exact(k).unwrap().iter().all(IntMatrix::is_zero));
            assert_eq!(commutation_check(k).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_non_units() {
        assert!(matches!("2i".parse::<UnitQuaternion>(), Err(Error::NotAUnit(_))));
        assert!(left_mult_matrix_str("i+j", 1).is_err());
        assert!(left_mult_matrix(UnitQuaternion::I, 0).is_err());
        assert_eq!("-k".parse::<UnitQuaternion>().unwrap(), UnitQuaternion::neg(Basis::K));
    }

    #[test]
    fn composed_operator_matches_product() {
        let f = AmbientOperator::Mult {
            side: Side::Right,
            unit: UnitQuaternion::I,
            blocks: 2,
        };
        let j = AmbientOperator::Mult {
            side: Side::Left,
            unit: UnitQuaternion::J,
            blocks: 2,
        };
        let composed = f.clone().then(j.clone());
        assert_eq!(composed.matrix().unwrap(), &j.matrix().unwrap() * &f.matrix().unwrap());
        assert_eq!(UnitQuaternion::I.pow(4), UnitQuaternion::ONE);
        assert_eq!(UnitQuaternion::I.pow(2), UnitQuaternion::neg(Basis::One));
    }
}
