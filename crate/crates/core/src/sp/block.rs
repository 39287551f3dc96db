//! Basic normal-form blocks and their literal matrices.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use super::matrix::{diamond_all, symplectic_defect};
use crate::error::{Result, SikError};
use crate::num::Angle;
use crate::scalar::Scalar;

/// Triviality class of an `N2` block: decided by the sign of `(b2 - b3) sin(theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum N2Class {
    Trivial,
    NonTrivial,
}

/// Basic normal forms. Angles carry `t = theta / 2pi` in `(0,1) \ {1/2}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum BasicBlock {
    /// `N1(lambda, b) = [[lambda, b], [0, lambda]]`, `lambda = +-1`.
    N1 { lambda: i8, b: f64 },
    /// `D(lambda) = diag(lambda, 1/lambda)`, `lambda` not in `{0, +-1}`.
    D { lambda: f64 },
    /// Rotation `R(theta)`.
    R { theta: Angle },
    /// `N2(e^{i theta}, B) = [[R(theta), B], [0, R(theta)]]` with `b2 != b3`.
    N2 { theta: Angle, b: [[f64; 2]; 2] },
}

impl BasicBlock {
    pub fn validate(&self) -> Result<()> {
        match self {
            BasicBlock::N1 { lambda, .. } => {
                if *lambda != 1 && *lambda != -1 {
                    return Err(SikError::InvalidInput("N1 lambda must be +-1".into()));
                }
            }
            BasicBlock::D { lambda } => {
                if *lambda == 0.0 || *lambda == 1.0 || *lambda == -1.0 {
                    return Err(SikError::InvalidInput("D lambda must avoid {0, +-1}".into()));
                }
            }
            BasicBlock::R { theta } => {
                if theta.is_half()? {
                    return Err(SikError::InvalidInput("R(theta) requires theta != pi".into()));
                }
            }
            BasicBlock::N2 { theta, b } => {
                if theta.is_half()? {
                    return Err(SikError::InvalidInput("N2 requires theta != pi".into()));
                }
                if b[0][1] == b[1][0] {
                    return Err(SikError::InvalidInput("N2 requires b2 != b3".into()));
                }
                self.n2_class()?;
                // The 4x4 must itself be symplectic: R(-theta) B symmetric.
                let m = self.materialize();
                let defect = symplectic_defect(&m)?;
                if defect > 1e-9 {
                    return Err(SikError::NotSymplectic {
                        defect,
                        tol: 1e-9,
                    });
                }
            }
        }
        Ok(())
    }

    /// Trivial vs non-trivial for `N2`; rejects `(b2 - b3) sin theta = 0`.
    pub fn n2_class(&self) -> Result<N2Class> {
        match self {
            BasicBlock::N2 { theta, b } => {
                let diff = b[0][1] - b[1][0];
                let sin_pos = theta.in_lower_half()?; // theta in (0, pi) <=> sin > 0
                let prod_neg = (diff < 0.0) == sin_pos;
                if diff == 0.0 {
                    return Err(SikError::InvalidInput(
                        "(b2 - b3) sin theta = 0 is rejected".into(),
                    ));
                }
                Ok(if prod_neg { N2Class::NonTrivial } else { N2Class::Trivial })
            }
            _ => Err(SikError::InvalidInput("n2_class on a non-N2 block".into())),
        }
    }

    pub fn half_dim(&self) -> usize {
        match self {
            BasicBlock::N2 { .. } => 2,
            _ => 1,
        }
    }

    /// The literal 2x2 or 4x4 matrix.
    pub fn materialize(&self) -> DMatrix<f64> {
        self.materialize_in::<f64>()
    }

    pub fn materialize_in<F: Scalar>(&self) -> DMatrix<F> {
        match self {
            BasicBlock::N1 { lambda, b } => {
                let l = F::approx(*lambda as f64);
                DMatrix::from_row_slice(2, 2, &[l, F::approx(*b), F::zero(), l])
            }
            BasicBlock::D { lambda } => {
                let l = F::approx(*lambda);
                DMatrix::from_row_slice(2, 2, &[l, F::zero(), F::zero(), F::one() / l])
            }
            BasicBlock::R { theta } => {
                let th = theta.to_f64() * std::f64::consts::TAU;
                let (s, c) = (F::approx(th.sin()), F::approx(th.cos()));
                DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
            }
            BasicBlock::N2 { theta, b } => {
                let th = theta.to_f64() * std::f64::consts::TAU;
                let (s, c) = th.sin_cos();
                let (cf, sf) = (F::approx(c), F::approx(s));
                let mut m = DMatrix::zeros(4, 4);
                for (r0, c0) in [(0usize, 0usize), (2, 2)] {
                    m[(r0, c0)] = cf;
                    m[(r0, c0 + 1)] = -sf;
                    m[(r0 + 1, c0)] = sf;
                    m[(r0 + 1, c0 + 1)] = cf;
                }
                for r in 0..2 {
                    for c in 0..2 {
                        m[(r, 2 + c)] = F::approx(b[r][c]);
                    }
                }
                m
            }
        }
    }
}

/// 2x2 rotation by `theta` (radians).
pub fn rot2(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Construct a symplectic `N2(e^{i theta}, B)` from a symmetric seed: `B = R(theta) Sigma`.
/// `Sigma = [[s1, s2], [s2, s3]]`; the class is non-trivial iff `tr Sigma > 0`.
pub fn n2_from_sigma(theta: Angle, s1: f64, s2: f64, s3: f64) -> Result<BasicBlock> {
    let th = theta.to_f64() * std::f64::consts::TAU;
    let sigma = Matrix2::new(s1, s2, s2, s3);
    let b = rot2(th) * sigma;
    let block = BasicBlock::N2 {
        theta,
        b: [[b[(0, 0)], b[(0, 1)]], [b[(1, 0)], b[(1, 1)]]],
    };
    block.validate()?;
    Ok(block)
}

/// Materialize a diamond product of blocks.
pub fn materialize_product(blocks: &[BasicBlock]) -> Result<DMatrix<f64>> {
    for b in blocks {
        b.validate()?;
    }
    let mats: Vec<_> = blocks.iter().map(|b| b.materialize()).collect();
    diamond_all(&mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sp::matrix::symplectic_defect;

    fn angle(t: f64) -> Angle {
        Angle::from_f64_approx(t, 1e-15).unwrap()
    }

    #[test]
    fn n1_literal() {
        let b = BasicBlock::N1 { lambda: 1, b: 1.0 };
        assert_eq!(
            b.materialize(),
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0])
        );
    }

    #[test]
    fn quarter_rotation() {
        let b = BasicBlock::R {
            theta: Angle::rational(1, 4).unwrap(),
        };
        let m = b.materialize();
        let expect = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((m - expect).amax() < 1e-15);
    }

    #[test]
    fn n2_shape_and_symplecticity() {
        let blk = n2_from_sigma(angle(0.15), 0.7, 0.2, 0.9).unwrap();
        let m = blk.materialize();
        assert_eq!(m.nrows(), 4);
        assert!(symplectic_defect(&m).unwrap() < 1e-12);
        // Upper-left and lower-right are the same rotation, lower-left is zero.
        assert!((m.view((2, 2), (2, 2)) - m.view((0, 0), (2, 2))).amax() < 1e-15);
        assert_eq!(m.view((2, 0), (2, 2)).amax(), 0.0);
        assert_eq!(blk.n2_class().unwrap(), N2Class::NonTrivial);
    }

    #[test]
    fn n2_trivial_class() {
        let blk = n2_from_sigma(angle(0.2), -1.0, 0.3, -0.5).unwrap();
        assert_eq!(blk.n2_class().unwrap(), N2Class::Trivial);
        // Upper-half angle, trivial: (b2-b3) sin theta > 0.
        if let BasicBlock::N2 { b, .. } = &blk {
            assert!((b[0][1] - b[1][0]) > 0.0);
        }
    }

    #[test]
    fn d_block_requires_valid_lambda() {
        assert!(BasicBlock::D { lambda: 1.0 }.validate().is_err());
        assert!(BasicBlock::D { lambda: 2.0 }.validate().is_ok());
    }
}
