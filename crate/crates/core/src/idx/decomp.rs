//! Homotopy normal-form decompositions and index seeds.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SikError};
use crate::num::{cf, Angle};

/// Counts and angle lists of a normal-form decomposition:
/// `N1(1,1)^p- | I^p0 | N1(1,-1)^p+ | N1(-1,1)^q- | (-I)^q0 | N1(-1,-1)^q+ |
/// R(theta_1..theta_r) | nontrivial N2(alpha_*) | trivial N2(beta_*) | M0`,
/// with `sigma(M0)` off the unit circle. Angles are stored as `t = theta/2pi`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormDecomposition {
    pub n: usize,
    /// `[p_minus, p_zero, p_plus]`
    pub p: [u32; 3],
    /// `[q_minus, q_zero, q_plus]`
    pub q: [u32; 3],
    pub thetas_over_2pi: Vec<Angle>,
    pub alphas_over_2pi: Vec<Angle>,
    pub betas_over_2pi: Vec<Angle>,
    pub hyp_dim: usize,
}

impl NormalFormDecomposition {
    pub fn r(&self) -> usize {
        self.thetas_over_2pi.len()
    }
    pub fn r_star(&self) -> usize {
        self.alphas_over_2pi.len()
    }
    pub fn r_zero(&self) -> usize {
        self.betas_over_2pi.len()
    }
    pub fn p_minus(&self) -> u32 {
        self.p[0]
    }
    pub fn p_zero(&self) -> u32 {
        self.p[1]
    }
    pub fn p_plus(&self) -> u32 {
        self.p[2]
    }
    pub fn q_minus(&self) -> u32 {
        self.q[0]
    }
    pub fn q_zero(&self) -> u32 {
        self.q[1]
    }
    pub fn q_plus(&self) -> u32 {
        self.q[2]
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(SikError::InvalidInput("n must be positive".into()));
        }
        if self.hyp_dim % 2 != 0 {
            return Err(SikError::InvalidInput("hyp_dim must be even".into()));
        }
        let ones: usize = (self.p.iter().sum::<u32>() + self.q.iter().sum::<u32>()) as usize;
        let total = ones + self.r() + 2 * self.r_star() + 2 * self.r_zero() + self.hyp_dim / 2;
        if total != self.n {
            return Err(SikError::InvalidInput(format!(
                "block dimensions sum to {total}, expected n = {}",
                self.n
            )));
        }
        for a in self.all_angles() {
            if a.is_half()? {
                return Err(SikError::InvalidInput("angle theta = pi is not allowed".into()));
            }
        }
        Ok(())
    }

    pub fn all_angles(&self) -> impl Iterator<Item = &Angle> {
        self.thetas_over_2pi
            .iter()
            .chain(self.alphas_over_2pi.iter())
            .chain(self.betas_over_2pi.iter())
    }

    /// The elliptic non-degenerate shape: a single `N1(1,1)` block plus
    /// rotations and `N2` pairs filling `r + 2 r* + 2 r0 = n - 1`.
    pub fn is_elliptic_nondegenerate_shape(&self) -> bool {
        self.p == [1, 0, 0]
            && self.q == [0, 0, 0]
            && self.hyp_dim == 0
            && self.r() + 2 * self.r_star() + 2 * self.r_zero() == self.n - 1
    }

    /// Nullity of the first iterate determined by the block structure.
    pub fn nu1(&self) -> u32 {
        self.p_minus() + 2 * self.p_zero() + self.p_plus()
    }

    /// Parity of `i(gamma, 1)` forced by the block structure (only meaningful
    /// when `hyp_dim = 0`): odd-index block count mod 2.
    pub fn index_parity(&self) -> Option<u8> {
        if self.hyp_dim != 0 {
            return None;
        }
        let odd_blocks = self.p_minus()
            + self.p_zero()
            + self.q_minus()
            + self.q_zero()
            + self.q_plus()
            + self.r() as u32;
        Some((odd_blocks % 2) as u8)
    }

    /// All iterates stay non-degenerate (nullity 1 for every m): requires the
    /// single eigenvalue-one shear, no eigenvalue -1, and angles that the
    /// desk-scale test declares irrational.
    pub fn all_iterates_nondegenerate(&self, q_max: u64, rat_tol: f64) -> bool {
        if self.nu1() != 1 || self.q != [0, 0, 0] || self.p_zero() != 0 {
            return false;
        }
        self.all_angles()
            .all(|a| !cf::detect_rational_angle(a, q_max, rat_tol).rational)
    }
}

/// The index data `(i(gamma,1), nu(gamma,1))` of a path; an input, not derived
/// from the matrix. Where a generating path is available the numeric oracle
/// can supply it.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexSeed {
    pub i1: i64,
    pub nu1: u32,
}

impl IndexSeed {
    pub fn validate_against(&self, dec: &NormalFormDecomposition) -> Result<()> {
        dec.validate()?;
        if self.nu1 != dec.nu1() {
            return Err(SikError::SeedInconsistent(format!(
                "nu1 = {} but the block structure forces {}",
                self.nu1,
                dec.nu1()
            )));
        }
        if let Some(par) = dec.index_parity() {
            if (self.i1.rem_euclid(2)) as u8 != par {
                return Err(SikError::SeedInconsistent(format!(
                    "i1 = {} has the wrong parity for the block structure (expected {par} mod 2)",
                    self.i1
                )));
            }
        }
        Ok(())
    }
}
