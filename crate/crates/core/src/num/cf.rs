//! Continued-fraction rationality detection.
//!
//! Whether a stored value "is" a rational multiple of 2pi cannot be decided
//! numerically; the desk-scale test declares a value rational iff some
//! convergent p/q with q <= q_max matches within abs_tol. Both knobs are
//! configuration, with defaults matching the rest of the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const DEFAULT_Q_MAX: u64 = 100_000;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalityVerdict {
    pub rational: bool,
    /// Best convergent found with denominator <= q_max.
    pub witness_num: i64,
    pub witness_den: u64,
    /// |x - p/q| for the witness.
    pub witness_error: f64,
}

/// Continued-fraction convergents of an exact rational value.
fn convergents(x: &BigRational, q_max: u64) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let (mut h0, mut h1) = (BigInt::from(1), num.div_floor(&den));
    let (mut k0, mut k1) = (BigInt::from(0), BigInt::from(1));
    // First partial quotient handled above (a0 = floor x).
    let a0 = h1.clone();
    num -= &a0 * &den;
    out.push((h1.clone(), k1.clone()));
    let qmax = BigInt::from(q_max);
    while !num.is_zero() {
        std::mem::swap(&mut num, &mut den);
        let a = num.div_floor(&den);
        num -= &a * &den;
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > qmax {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        out.push((h1.clone(), k1.clone()));
    }
    out
}

/// Desk-scale rationality test on an exact rational representation of the value.
pub fn detect_rational(x: &BigRational, q_max: u64, abs_tol: f64) -> RationalityVerdict {
    let mut best: Option<(BigInt, BigInt, BigRational)> = None;
    for (p, q) in convergents(x, q_max) {
        let err = (x - BigRational::new(p.clone(), q.clone())).abs();
        if best.as_ref().map_or(true, |(_, _, e)| &err < e) {
            best = Some((p, q, err));
        }
    }
    match best {
        Some((p, q, err)) => {
            let e = err.to_f64().unwrap_or(f64::INFINITY);
            RationalityVerdict {
                rational: e <= abs_tol,
                witness_num: p.to_i64().unwrap_or(i64::MAX),
                witness_den: q.to_u64().unwrap_or(u64::MAX),
                witness_error: e,
            }
        }
        None => RationalityVerdict {
            rational: false,
            witness_num: 0,
            witness_den: 1,
            witness_error: f64::INFINITY,
        },
    }
}

/// Rationality test for a plain double (e.g. an eigenvalue angle).
pub fn detect_rational_f64(x: f64, q_max: u64, abs_tol: f64) -> RationalityVerdict {
    match BigRational::from_float(x) {
        Some(r) => detect_rational(&r, q_max, abs_tol),
        None => RationalityVerdict {
            rational: false,
            witness_num: 0,
            witness_den: 1,
            witness_error: f64::INFINITY,
        },
    }
}

/// Rationality test for an [`Angle`](super::angle::Angle)-stored value.
pub fn detect_rational_angle(
    a: &super::angle::Angle,
    q_max: u64,
    abs_tol: f64,
) -> RationalityVerdict {
    match a {
        super::angle::Angle::Rational(r) => detect_rational(r, q_max, abs_tol),
        super::angle::Angle::Fixed(f) => {
            let num = BigInt::from(f.bits);
            let den = BigInt::from(1u8) << 128;
            detect_rational(&BigRational::new(num, den), q_max, abs_tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_small_rational_detected() {
        let v = detect_rational(&BigRational::new(2.into(), 7.into()), DEFAULT_Q_MAX, DEFAULT_TOL);
        assert!(v.rational);
        assert_eq!((v.witness_num, v.witness_den), (2, 7));
        assert_eq!(v.witness_error, 0.0);
    }

    #[test]
    fn sqrt2_fraction_declared_irrational_at_defaults() {
        let v = detect_rational_f64(2f64.sqrt() - 1.0, DEFAULT_Q_MAX, DEFAULT_TOL);
        assert!(!v.rational, "witness {}/{} err {}", v.witness_num, v.witness_den, v.witness_error);
    }

    #[test]
    fn near_rational_decimal_detected() {
        let v = detect_rational_f64(0.333333333333333, DEFAULT_Q_MAX, DEFAULT_TOL);
        assert!(v.rational);
        assert_eq!((v.witness_num, v.witness_den), (1, 3));
    }
}
