//! 128-bit fixed-point fractions with tracked error bounds.
//!
//! A `Frac128` stores a value in `[0, 1)` as `bits / 2^128` together with an
//! absolute error radius in ulps (units of `2^-128`). Multiplication by an
//! integer is exact in the bits and scales the error, which is what makes
//! floor/ceiling evaluation of `m * theta` certifiable: the floor is accepted
//! only when the fractional part is farther from the nearest integer than the
//! accumulated error.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, SikError};

/// Number of fraction bits in the fixed-point representation.
pub const FRAC_BITS: u32 = 128;

fn precision_floor_ulps() -> u128 {
    // SIK_PRECISION_BITS caps the effective precision (<= 128). Inputs are
    // treated as uncertain below that width.
    static FLOOR: once_cell::sync::Lazy<u128> = once_cell::sync::Lazy::new(|| {
        let bits = std::env::var("SIK_PRECISION_BITS")
            .ok()
            .and_then(|v| v.parse::<u32>().ok())
            .unwrap_or(128)
            .clamp(16, 128);
        if bits >= 128 {
            1
        } else {
            1u128 << (128 - bits)
        }
    });
    *FLOOR
}

/// Fraction in `[0,1)` with an error radius, both in units of `2^-128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac128 {
    pub bits: u128,
    pub err: u128,
}

impl Frac128 {
    pub fn zero() -> Self {
        Frac128 { bits: 0, err: 0 }
    }

    /// Exact fraction `p/q` (fractional part of it), `q > 0`.
    pub fn from_ratio(p: &BigUint, q: &BigUint) -> Result<Self> {
        if q.is_zero() {
            return Err(SikError::InvalidInput("zero denominator".into()));
        }
        let rem = p % q;
        let scaled = (rem << FRAC_BITS) / q;
        let bits = scaled
            .to_u128()
            .ok_or_else(|| SikError::InternalInconsistency("fraction overflow".into()))?;
        Ok(Frac128 {
            bits,
            err: precision_floor_ulps(),
        })
    }

    /// Fraction of the L-th root of `num/den`, i.e. frac((num/den)^(1/degree)),
    /// together with the integer part of the root. Error <= 2 ulps + precision floor.
    pub fn root_of_ratio(num: &BigUint, den: &BigUint, degree: u32) -> Result<(u64, Self)> {
        if den.is_zero() || num.is_zero() || degree == 0 {
            return Err(SikError::InvalidInput("root_of_ratio needs positive arguments".into()));
        }
        // floor( (num/den)^(1/L) * 2^128 ) = floor( (num * 2^(128 L) / den)^(1/L) ) up to 2 ulps.
        let shifted = (num << (FRAC_BITS as usize * degree as usize)) / den;
        let root = shifted.nth_root(degree);
        let int_part = (&root >> FRAC_BITS)
            .to_u64()
            .ok_or_else(|| SikError::InvalidInput("root integer part too large".into()))?;
        let mask = (BigUint::one() << FRAC_BITS) - BigUint::one();
        let bits = (&root & &mask).to_u128().expect("masked to 128 bits");
        Ok((
            int_part,
            Frac128 {
                bits,
                err: 2 + precision_floor_ulps(),
            },
        ))
    }

    /// Parse a decimal string in [0, 1) or a full decimal, returning (integer part, fraction).
    pub fn from_decimal_str(s: &str) -> Result<(u64, Self)> {
        let s = s.trim();
        let (int_str, frac_str) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        if int_str.starts_with('-') {
            return Err(SikError::InvalidInput("negative decimal not allowed here".into()));
        }
        let int_part: u64 = if int_str.is_empty() {
            0
        } else {
            int_str
                .parse()
                .map_err(|_| SikError::InvalidInput(format!("bad decimal '{s}'")))?
        };
        if frac_str.is_empty() {
            return Ok((int_part, Frac128::zero()));
        }
        if !frac_str.bytes().all(|b| b.is_ascii_digit()) {
            return Err(SikError::InvalidInput(format!("bad decimal '{s}'")));
        }
        let p = BigUint::parse_bytes(frac_str.as_bytes(), 10).expect("digits");
        let q = BigUint::from(10u32).pow(frac_str.len() as u32);
        let f = Frac128::from_ratio(&p, &q)?;
        Ok((int_part, f))
    }

    /// `self * m`, split into integer part and fraction. Exact in the bits;
    /// the error scales by `m`.
    pub fn mul_u64(&self, m: u64) -> (u64, Frac128) {
        let m128 = m as u128;
        let hi = self.bits >> 64;
        let lo = self.bits & ((1u128 << 64) - 1);
        let p_hi = m128 * hi; // < 2^128
        let p_lo = m128 * lo; // < 2^128
        let carry = p_hi + (p_lo >> 64); // value = carry * 2^64 + (p_lo & mask)
        let int = (carry >> 64) as u64;
        let frac = (carry << 64) | (p_lo & ((1u128 << 64) - 1));
        let err = self.err.saturating_mul(m128);
        (int, Frac128 { bits: frac, err })
    }

    /// Certified floor/frac of `self * m`: errors if the result is within the
    /// error radius of an integer boundary.
    pub fn mul_u64_certified(&self, m: u64, what: &str) -> Result<(u64, Frac128)> {
        let (int, frac) = self.mul_u64(m);
        let dist_low = frac.bits;
        let dist_high = u128::MAX - frac.bits; // ~ 2^128 - bits
        if dist_low <= frac.err || dist_high <= frac.err {
            return Err(SikError::Certification(format!(
                "{what}: m = {m} lands within {} ulps of an integer",
                frac.err
            )));
        }
        Ok((int, frac))
    }

    pub fn to_f64(&self) -> f64 {
        (self.bits as f64) / 2f64.powi(128)
    }

    /// Certified strict comparison against an exact rational bound `p/q` in [0,1].
    /// Returns Less/Greater; errors when within the error radius.
    pub fn cmp_ratio(&self, p: u64, q: u64, what: &str) -> Result<std::cmp::Ordering> {
        assert!(q > 0 && p <= q);
        if p == q {
            // self < 1 always holds for a fraction.
            return Ok(std::cmp::Ordering::Less);
        }
        let bound = ((BigUint::from(p) << FRAC_BITS) / BigUint::from(q))
            .to_u128()
            .expect("bound fits");
        let d = self.bits.abs_diff(bound);
        if d <= self.err {
            return Err(SikError::Certification(format!(
                "{what}: value within {} ulps of bound {p}/{q}",
                self.err
            )));
        }
        Ok(self.bits.cmp(&bound))
    }

    /// 1 - self; requires self in (0,1).
    pub fn one_minus(&self) -> Frac128 {
        debug_assert!(self.bits != 0);
        Frac128 {
            bits: (u128::MAX - self.bits).wrapping_add(1),
            err: self.err,
        }
    }

    /// Format as a decimal string with `digits` fractional digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let mut out = String::with_capacity(digits + 2);
        out.push_str("0.");
        let ten = BigUint::from(10u32);
        let mut rem = BigUint::from(self.bits);
        for _ in 0..digits {
            rem *= &ten;
            let digit = (&rem >> FRAC_BITS).to_u8().unwrap_or(0);
            out.push((b'0' + digit) as char);
            let mask = (BigUint::one() << FRAC_BITS) - BigUint::one();
            rem &= mask;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_roundtrip() {
        let f = Frac128::from_ratio(&BigUint::from(1u32), &BigUint::from(3u32)).unwrap();
        assert!((f.to_f64() - 1.0 / 3.0).abs() < 1e-30);
    }

    #[test]
    fn sqrt2_fraction() {
        // frac(sqrt(2)) = 0.41421356...
        let (int, f) = Frac128::root_of_ratio(&BigUint::from(2u32), &BigUint::from(1u32), 2).unwrap();
        assert_eq!(int, 1);
        assert!((f.to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn mul_certified_floor() {
        // frac(sqrt(2)) * 29 = 12.012193...; floor certified 12.
        let (_, f) = Frac128::root_of_ratio(&BigUint::from(2u32), &BigUint::from(1u32), 2).unwrap();
        let (int, frac) = f.mul_u64_certified(29, "test").unwrap();
        assert_eq!(int, 12);
        assert!((frac.to_f64() - 0.0121933).abs() < 1e-6);
    }

    #[test]
    fn decimal_parse() {
        let (i, f) = Frac128::from_decimal_str("1.41421356237309504880168872420969807").unwrap();
        assert_eq!(i, 1);
        assert!((f.to_f64() - 0.41421356237309504).abs() < 1e-16);
    }

    #[test]
    fn exact_rational_near_boundary_fails_certification() {
        // 1/3 * 3 = 1 exactly: floor of 3*(1/3) is on a boundary.
        let f = Frac128::from_ratio(&BigUint::from(1u32), &BigUint::from(3u32)).unwrap();
        assert!(f.mul_u64_certified(3, "test").is_err());
    }
}
