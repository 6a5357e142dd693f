use itertools::Itertools;

use super::rational::RationalMatrix;
use crate::error::{Error, Result};

/// The `k`-subsets of `0..n` in lexicographic order; index sets of the wedge
/// basis `e_{i1} ∧ … ∧ e_{ik}` of `Λ^k`.
pub fn wedge_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// Matrix of `Λ^k M` on the lexicographic wedge basis: the entry at
/// `(I, J)` is the minor `det M[I, J]`.
pub fn exterior_power(m: &RationalMatrix, k: usize) -> Result<RationalMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let n = m.nrows();
    if k > n {
        return Err(Error::DegreeOutOfRange { k, n });
    }
    let basis = wedge_basis(n, k);
    Ok(RationalMatrix::from_fn(basis.len(), basis.len(), |r, c| {
        m.submatrix(&basis[r], &basis[c]).determinant()
    }))
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use num_rational::BigRational;

    use super::*;

    #[test]
    fn low_degrees() {
        let a = RationalMatrix::from_i64_rows(&[vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 1]]);
        assert_eq!(exterior_power(&a, 0).unwrap(), RationalMatrix::identity(1));
        assert_eq!(exterior_power(&a, 1).unwrap(), a);
        let top = exterior_power(&a, 3).unwrap();
        assert_eq!(top.get(0, 0), &a.determinant());
        assert_eq!(top.get(0, 0), &BigRational::from_integer(BigInt::from(25)));
        assert_eq!(exterior_power(&a, 4), Err(Error::DegreeOutOfRange { k: 4, n: 3 }));
    }

    #[test]
    fn basis_sizes_are_binomial() {
        assert_eq!(
            wedge_basis(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(wedge_basis(8, 4).len(), 70);
    }
}
