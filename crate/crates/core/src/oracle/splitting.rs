//! Splitting numbers as limits of omega-indices.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::index::{omega_index, OracleOptions};
use super::path::PathSpec;
use crate::error::{Result, SikError};

/// Decreasing epsilon sequence for the splitting limit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsSequence {
    pub start: f64,
    pub halvings: usize,
}

impl Default for EpsSequence {
    fn default() -> Self {
        // eps_j = 2^-j * 1e-2, j = 0..20
        EpsSequence { start: 1e-2, halvings: 20 }
    }
}

impl EpsSequence {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.halvings).map(|j| self.start / 2f64.powi(j as i32))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplittingResult {
    pub s_plus: i64,
    pub s_minus: i64,
    /// Epsilon at which the limit stabilized (three consecutive agreements).
    pub eps_stable: f64,
}

/// `S^{+-}(omega) = lim i_{omega e^{+- i eps}} - i_omega`, stabilized over the
/// epsilon sequence. Three consecutive agreements are required.
pub fn numeric_splitting(
    path: &PathSpec<f64>,
    omega: Complex<f64>,
    eps_seq: &EpsSequence,
    opts: &OracleOptions,
) -> Result<SplittingResult> {
    let base = omega_index(path, 1, omega, opts)?.index;
    let mut history: Vec<(f64, i64, i64)> = Vec::new();
    for eps in eps_seq.values() {
        let up = Complex::from_polar(1.0, omega.arg() + eps);
        let down = Complex::from_polar(1.0, omega.arg() - eps);
        let s_plus = omega_index(path, 1, up, opts)?.index - base;
        let s_minus = omega_index(path, 1, down, opts)?.index - base;
        history.push((eps, s_plus, s_minus));
        let k = history.len();
        if k >= 3 {
            let (_, p1, m1) = history[k - 1];
            let (_, p2, m2) = history[k - 2];
            let (_, p3, m3) = history[k - 3];
            if p1 == p2 && p2 == p3 && m1 == m2 && m2 == m3 {
                return Ok(SplittingResult {
                    s_plus,
                    s_minus,
                    eps_stable: eps,
                });
            }
        }
    }
    Err(SikError::SplittingUnstable {
        omega: format!("{omega}"),
        eps_min: history.last().map(|h| h.0).unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Angle;
    use crate::oracle::generator::generator_path_for;
    use crate::sp::block::BasicBlock;

    fn split(block: &BasicBlock, omega: Complex<f64>) -> (i64, i64) {
        let p = generator_path_for(block).unwrap();
        let r = numeric_splitting(&p, omega, &EpsSequence::default(), &OracleOptions::default())
            .unwrap();
        (r.s_plus, r.s_minus)
    }

    #[test]
    fn shear_splitting_at_one() {
        let one = Complex::new(1.0, 0.0);
        assert_eq!(split(&BasicBlock::N1 { lambda: 1, b: 1.0 }, one), (1, 1));
        assert_eq!(split(&BasicBlock::N1 { lambda: 1, b: -1.0 }, one), (0, 0));
    }

    #[test]
    fn rotation_splitting_at_its_angle() {
        let t = 0.23;
        let omega = Complex::from_polar(1.0, t * std::f64::consts::TAU);
        let blk = BasicBlock::R {
            theta: Angle::from_f64_approx(t, 1e-15).unwrap(),
        };
        assert_eq!(split(&blk, omega), (0, 1));
        assert_eq!(split(&blk, omega.conj()), (1, 0));
    }
}
