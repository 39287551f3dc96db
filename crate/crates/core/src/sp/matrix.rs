//! Standard symplectic form, diamond sums, and checked symplectic matrices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SikError};
use crate::scalar::Scalar;

/// Default tolerance for the symplectic constraint `M^T J M = J`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;
/// Sanity tolerance for `det M = 1`.
pub const DET_TOL: f64 = 1e-8;

/// The standard form `J = [[0, -I_n], [I_n, 0]]`.
pub fn standard_j<F: Scalar>(n: usize) -> DMatrix<F> {
    assert!(n >= 1, "standard_j requires n >= 1");
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -F::one();
        j[(n + i, i)] = F::one();
    }
    j
}

/// Max-abs deviation of `M^T J M` from `J`.
pub fn symplectic_defect<F: Scalar>(m: &DMatrix<F>) -> Result<F> {
    let dim = m.nrows();
    if m.ncols() != dim || dim % 2 != 0 || dim == 0 {
        return Err(SikError::InvalidInput(format!(
            "expected even square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let j = standard_j::<F>(dim / 2);
    let d = m.transpose() * &j * m - &j;
    Ok(d.iter().fold(F::zero(), |acc, x| {
        nalgebra::RealField::max(acc, nalgebra::ComplexField::abs(*x))
    }))
}

/// Interleaved direct sum: blocks of `a` land at the odd block positions,
/// blocks of `b` at the even ones, preserving the (x, y) split.
pub fn diamond<F: Scalar>(a: &DMatrix<F>, b: &DMatrix<F>) -> Result<DMatrix<F>> {
    for (m, name) in [(a, "left"), (b, "right")] {
        if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
            return Err(SikError::InvalidInput(format!(
                "{name} operand of diamond must be even square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let i = a.nrows() / 2;
    let j = b.nrows() / 2;
    let n = i + j;
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    // Quadrants of the operands.
    let put = |out: &mut DMatrix<F>, src: &DMatrix<F>, half: usize, ro: usize, co: usize| {
        for (rq, rows) in [(0usize, 0usize), (1, half)] {
            for (cq, cols) in [(0usize, 0usize), (1, half)] {
                for r in 0..half {
                    for c in 0..half {
                        out[(ro + rq * n + r, co + cq * n + c)] = src[(rows + r, cols + c)];
                    }
                }
            }
        }
    };
    put(&mut out, a, i, 0, 0);
    put(&mut out, b, j, i, i);
    Ok(out)
}

/// Diamond of an ordered list of blocks.
pub fn diamond_all<F: Scalar>(blocks: &[DMatrix<F>]) -> Result<DMatrix<F>> {
    let mut it = blocks.iter();
    let first = it
        .next()
        .ok_or_else(|| SikError::InvalidInput("diamond of empty list".into()))?
        .clone();
    it.try_fold(first, |acc, b| diamond(&acc, b))
}

/// A `2n x 2n` real matrix satisfying the symplectic constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix<F: Scalar = f64> {
    n: usize,
    mat: DMatrix<F>,
}

impl<F: Scalar> SymplecticMatrix<F> {
    pub fn new(mat: DMatrix<F>) -> Result<Self> {
        Self::with_tol(mat, F::approx(SYMPLECTIC_TOL))
    }

    pub fn with_tol(mat: DMatrix<F>, tol: F) -> Result<Self> {
        let defect = symplectic_defect(&mat)?;
        if defect > tol {
            return Err(SikError::NotSymplectic {
                defect: num_traits::ToPrimitive::to_f64(&defect).unwrap_or(f64::NAN),
                tol: num_traits::ToPrimitive::to_f64(&tol).unwrap_or(f64::NAN),
            });
        }
        let det = mat.clone().lu().determinant();
        let det_dev = nalgebra::ComplexField::abs(det - F::one());
        if det_dev > F::approx(DET_TOL) {
            return Err(SikError::InvalidInput(format!(
                "det M deviates from 1 by {:.3e}",
                num_traits::ToPrimitive::to_f64(&det_dev).unwrap_or(f64::NAN)
            )));
        }
        Ok(SymplecticMatrix {
            n: mat.nrows() / 2,
            mat,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &DMatrix<F> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<F> {
        self.mat
    }
}

/// JSON schema {"n": int, "rows": [[...], ...]} for matrix interchange.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        let dim = 2 * self.n;
        if self.rows.len() != dim || self.rows.iter().any(|r| r.len() != dim) {
            return Err(SikError::InvalidInput(format!(
                "matrix rows must be {dim}x{dim}"
            )));
        }
        Ok(DMatrix::from_fn(dim, dim, |r, c| self.rows[r][c]))
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        MatrixJson {
            n: m.nrows() / 2,
            rows: (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_small_cases() {
        let j1 = standard_j::<f64>(1);
        assert_eq!(j1, DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let j2 = standard_j::<f64>(2);
        assert_eq!(j2[(0, 2)], -1.0);
        assert_eq!(j2[(1, 3)], -1.0);
        assert_eq!(j2[(2, 0)], 1.0);
        assert_eq!(j2[(3, 1)], 1.0);
        assert_eq!(j2.iter().map(|x| x.abs()).sum::<f64>(), 4.0);
    }

    #[test]
    fn j_squares_to_minus_identity() {
        let j = standard_j::<f64>(3);
        let jj = &j * &j;
        assert_eq!(jj, -DMatrix::<f64>::identity(6, 6));
    }

    #[test]
    fn diamond_identity() {
        let i2 = DMatrix::<f64>::identity(2, 2);
        let d = diamond(&i2, &i2).unwrap();
        assert_eq!(d, DMatrix::<f64>::identity(4, 4));
    }

    #[test]
    fn diamond_matches_block_layout() {
        // diamond([[a1,b1],[c1,d1]], [[a2,b2],[c2,d2]]) per the interleaved pattern
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = DMatrix::from_row_slice(2, 2, &[5.0, 6.0, 7.0, 8.0]);
        let d = diamond(&a, &b).unwrap();
        let expect = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 2.0, 0.0, //
                0.0, 5.0, 0.0, 6.0, //
                3.0, 0.0, 4.0, 0.0, //
                0.0, 7.0, 0.0, 8.0,
            ],
        );
        assert_eq!(d, expect);
    }

    #[test]
    fn diamond_of_js_is_j() {
        let j1 = standard_j::<f64>(1);
        let j2 = standard_j::<f64>(2);
        assert_eq!(diamond(&j1, &j2).unwrap(), standard_j::<f64>(3));
    }

    #[test]
    fn odd_dimension_rejected() {
        let m = DMatrix::<f64>::identity(3, 3);
        assert!(diamond(&m, &m).is_err());
    }
}
