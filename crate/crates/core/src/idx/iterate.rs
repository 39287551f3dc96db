//! Index iteration: `(i(gamma, m), nu(gamma, m))`, mean index, and the
//! Viterbo-graded variant `i(y^m) = i(gamma, m) - n`.
//!
//! Floor and ceiling terms are evaluated exactly for rational angles and with
//! certified 128-bit fixed-point arithmetic otherwise; an uncertifiable floor
//! is an error, never a guess.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::decomp::{IndexSeed, NormalFormDecomposition};
use crate::error::{Result, SikError};

/// `(i(gamma, m), nu(gamma, m))` by the iteration formulas.
///
/// Note: the formula is evaluated for any structurally valid `(dec, seed)`;
/// callers that need Theorem-grade consistency (parity and nullity gates)
/// validate the seed separately via [`IndexSeed::validate_against`].
pub fn iterate_index(
    dec: &NormalFormDecomposition,
    seed: &IndexSeed,
    m: u64,
) -> Result<(i64, u32)> {
    if m == 0 {
        return Err(SikError::InvalidInput("iterate requires m >= 1".into()));
    }
    dec.validate()?;
    let mi = m as i128;
    let (p_minus, p_zero) = (dec.p_minus() as i128, dec.p_zero() as i128);
    let (q_minus, q_zero, q_plus) =
        (dec.q_minus() as i128, dec.q_zero() as i128, dec.q_plus() as i128);
    let r = dec.r() as i128;
    let r_star = dec.r_star() as i128;
    let r_zero = dec.r_zero() as i128;
    let even = if m % 2 == 0 { 1i128 } else { 0 };

    let mut sum_e: i128 = 0;
    let mut sum_phi_theta: i128 = 0;
    for t in &dec.thetas_over_2pi {
        sum_e += t.ceil_mul(m)? as i128;
        sum_phi_theta += t.phi_mul(m)? as i128;
    }
    let mut sum_phi_alpha: i128 = 0;
    for a in &dec.alphas_over_2pi {
        sum_phi_alpha += a.phi_mul(m)? as i128;
    }
    let mut sum_phi_beta: i128 = 0;
    for b in &dec.betas_over_2pi {
        sum_phi_beta += b.phi_mul(m)? as i128;
    }

    let i_m: i128 = mi * (seed.i1 as i128 + p_minus + p_zero - r) + 2 * sum_e
        - r
        - p_minus
        - p_zero
        - even * (q_zero + q_plus)
        + 2 * (sum_phi_alpha - r_star);

    let nu_m: i128 = seed.nu1 as i128 + even * (q_minus + 2 * q_zero + q_plus)
        + 2 * (r + r_star + r_zero)
        - 2 * (sum_phi_theta + sum_phi_alpha + sum_phi_beta);

    let i_m = i64::try_from(i_m)
        .map_err(|_| SikError::InternalInconsistency("index overflow".into()))?;
    let nu_m = u32::try_from(nu_m)
        .map_err(|_| SikError::InternalInconsistency("negative nullity".into()))?;
    Ok((i_m, nu_m))
}

/// Mean index `i(gamma,1) + p_- + p_0 - r + sum theta_j / pi`.
pub fn mean_index(dec: &NormalFormDecomposition, seed: &IndexSeed) -> Result<f64> {
    dec.validate()?;
    let base =
        seed.i1 as f64 + dec.p_minus() as f64 + dec.p_zero() as f64 - dec.r() as f64;
    let angle_sum: f64 = dec.thetas_over_2pi.iter().map(|t| 2.0 * t.to_f64()).sum();
    Ok(base + angle_sum)
}

/// Exact mean index when every rotation angle is a rational multiple of 2pi.
pub fn mean_index_exact(
    dec: &NormalFormDecomposition,
    seed: &IndexSeed,
) -> Option<BigRational> {
    let mut sum = BigRational::from_integer(BigInt::from(
        seed.i1 + dec.p_minus() as i64 + dec.p_zero() as i64 - dec.r() as i64,
    ));
    for t in &dec.thetas_over_2pi {
        let r = t.is_exact_rational()?;
        sum += r * BigRational::from_integer(2.into());
    }
    Some(sum)
}

/// `i(y^m) = i(gamma, m) - n`, `nu(y^m) = nu(gamma, m)`.
pub fn viterbo_index(
    dec: &NormalFormDecomposition,
    seed: &IndexSeed,
    m: u64,
) -> Result<(i64, u32)> {
    let (i_m, nu_m) = iterate_index(dec, seed, m)?;
    Ok((i_m - dec.n as i64, nu_m))
}

/// Residue of `i(y^m)` mod 2 on the elliptic non-degenerate shape.
///
/// Implemented as a theorem check: evaluates the index and errors on an odd
/// value, which indicates an inconsistent seed rather than a formula property.
pub fn parity(dec: &NormalFormDecomposition, seed: &IndexSeed, m: u64) -> Result<u8> {
    if !dec.is_elliptic_nondegenerate_shape() {
        return Err(SikError::InvalidInput(
            "parity check requires the elliptic non-degenerate shape".into(),
        ));
    }
    seed.validate_against(dec)?;
    let (iv, _) = viterbo_index(dec, seed, m)?;
    if iv.rem_euclid(2) != 0 {
        return Err(SikError::InternalInconsistency(format!(
            "odd iterated index {iv} at m = {m}: seed inconsistent with the shape"
        )));
    }
    Ok(0)
}

/// Upper bound for `|i(gamma, m) - m * mean|`, used to certify enumeration
/// windows. Valid for every m >= 1.
pub fn mean_deviation_bound(dec: &NormalFormDecomposition) -> i64 {
    let r = dec.r() as i64;
    let low = r
        + (dec.p_minus() + dec.p_zero() + dec.q_zero() + dec.q_plus()) as i64
        + 2 * dec.r_star() as i64;
    let high = 2 * r;
    low.max(high) + 1
}
