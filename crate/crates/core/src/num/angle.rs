//! Rotation angles with exact or certified high-precision arithmetic.
//!
//! Angles are stored as `t = theta / 2pi` in the open interval `(0, 1)`.
//! Rational angles evaluate floors and fractional parts exactly; all other
//! angles go through [`Frac128`] with certified floor evaluation. Floor terms
//! are the entire content of the iteration formulas, so a value too close to
//! a discontinuity is an error, never a guess.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::fixed::Frac128;
use crate::error::{Result, SikError};

pub const DECIMAL_DIGITS: usize = 40;

/// `t = theta / 2pi`, in `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    Rational(BigRational),
    Fixed(Frac128),
}

/// Fractional part of an integer multiple of an angle, comparable against
/// exact rational window bounds.
#[derive(Debug, Clone)]
pub enum FracPart {
    Rational(BigRational),
    Fixed(Frac128),
}

impl Angle {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(SikError::InvalidInput("angle with zero denominator".into()));
        }
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        Angle::Rational(r).validated()
    }

    pub fn from_big_rational(r: BigRational) -> Result<Self> {
        Angle::Rational(r).validated()
    }

    pub fn fixed(f: Frac128) -> Result<Self> {
        Angle::Fixed(f).validated()
    }

    /// Decimal string in (0,1), e.g. "0.41421356...".
    pub fn from_decimal_str(s: &str) -> Result<Self> {
        let (int, f) = Frac128::from_decimal_str(s)?;
        if int != 0 {
            return Err(SikError::InvalidInput(format!(
                "angle '{s}' outside (0,1)"
            )));
        }
        Angle::Fixed(f).validated()
    }

    /// Best-effort construction from a double (used when recovering a
    /// decomposition from a raw matrix). The error radius accounts for the
    /// solver accuracy `abs_err`.
    pub fn from_f64_approx(t: f64, abs_err: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(SikError::InvalidInput(format!("angle {t} outside (0,1)")));
        }
        let bits = (t * 2f64.powi(128)) as u128;
        let err = ((abs_err.max(1e-15)) * 2f64.powi(128)) as u128;
        Angle::Fixed(Frac128 { bits, err }).validated()
    }

    fn validated(self) -> Result<Self> {
        match &self {
            Angle::Rational(r) => {
                if r <= &BigRational::zero() || r >= &BigRational::from_integer(1.into()) {
                    return Err(SikError::InvalidInput(format!(
                        "angle {r} outside (0,1)"
                    )));
                }
            }
            Angle::Fixed(f) => {
                if f.bits == 0 {
                    return Err(SikError::InvalidInput("angle 0 outside (0,1)".into()));
                }
            }
        }
        Ok(self)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Angle::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Angle::Fixed(f) => f.to_f64(),
        }
    }

    /// True when `theta != pi` cannot be certified or fails, i.e. t == 1/2.
    pub fn is_half(&self) -> Result<bool> {
        match self {
            Angle::Rational(r) => Ok(r == &BigRational::new(1.into(), 2.into())),
            Angle::Fixed(f) => match f.cmp_ratio(1, 2, "theta vs pi")? {
                Ordering::Equal => Ok(true),
                _ => Ok(false),
            },
        }
    }

    /// `sin(theta) > 0`, i.e. t < 1/2. Errors if undecidable.
    pub fn in_lower_half(&self) -> Result<bool> {
        match self {
            Angle::Rational(r) => Ok(r < &BigRational::new(1.into(), 2.into())),
            Angle::Fixed(f) => Ok(f.cmp_ratio(1, 2, "theta vs pi")? == Ordering::Less),
        }
    }

    /// floor(m * t), certified.
    pub fn floor_mul(&self, m: u64) -> Result<u64> {
        match self {
            Angle::Rational(r) => {
                let num = r.numer() * BigInt::from(m);
                let fl = num.div_floor(r.denom());
                fl.to_u64()
                    .ok_or_else(|| SikError::InternalInconsistency("floor overflow".into()))
            }
            Angle::Fixed(f) => {
                let (int, _) = f.mul_u64_certified(m, "floor(m*theta/2pi)")?;
                Ok(int)
            }
        }
    }

    /// E(m * t) = min{k in Z : k >= m t}, certified.
    pub fn ceil_mul(&self, m: u64) -> Result<u64> {
        match self {
            Angle::Rational(r) => {
                let num = r.numer() * BigInt::from(m);
                let c = num.div_ceil(r.denom());
                c.to_u64()
                    .ok_or_else(|| SikError::InternalInconsistency("ceil overflow".into()))
            }
            Angle::Fixed(_) => Ok(self.floor_mul(m)? + 1),
        }
    }

    /// phi(m t) = E(m t) - floor(m t), i.e. 0 iff m t is an integer.
    pub fn phi_mul(&self, m: u64) -> Result<u8> {
        match self {
            Angle::Rational(r) => {
                let num = r.numer() * BigInt::from(m);
                Ok(if (&num % r.denom()).is_zero() { 0 } else { 1 })
            }
            // Certified non-integer; an uncertifiable case errors in floor_mul.
            Angle::Fixed(f) => {
                f.mul_u64_certified(m, "phi(m*theta/2pi)")?;
                Ok(1)
            }
        }
    }

    /// Fractional part {m * t}, as an exactly comparable value.
    pub fn frac_mul(&self, m: u64) -> Result<FracPart> {
        match self {
            Angle::Rational(r) => {
                let num = r.numer() * BigInt::from(m);
                let rem = num.mod_floor(r.denom());
                Ok(FracPart::Rational(BigRational::new(rem, r.denom().clone())))
            }
            Angle::Fixed(f) => {
                let (_, frac) = f.mul_u64(m);
                Ok(FracPart::Fixed(frac))
            }
        }
    }

    pub fn is_exact_rational(&self) -> Option<&BigRational> {
        match self {
            Angle::Rational(r) => Some(r),
            Angle::Fixed(_) => None,
        }
    }
}

impl FracPart {
    pub fn to_f64(&self) -> f64 {
        match self {
            FracPart::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            FracPart::Fixed(f) => f.to_f64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FracPart::Rational(r) => r.is_zero(),
            FracPart::Fixed(f) => f.bits == 0 && f.err == 0,
        }
    }

    /// Certified strict test `lo < self < hi` for rational window bounds.
    /// `None` bound means the corresponding side is not constrained.
    pub fn strictly_inside(&self, lo: (u64, u64), hi: (u64, u64), what: &str) -> Result<bool> {
        match self {
            FracPart::Rational(r) => {
                let lo_r = BigRational::new(BigInt::from(lo.0), BigInt::from(lo.1));
                let hi_r = BigRational::new(BigInt::from(hi.0), BigInt::from(hi.1));
                Ok(r > &lo_r && r < &hi_r)
            }
            FracPart::Fixed(f) => {
                let above = f.cmp_ratio(lo.0, lo.1, what)? == Ordering::Greater;
                if !above {
                    return Ok(false);
                }
                Ok(f.cmp_ratio(hi.0, hi.1, what)? == Ordering::Less)
            }
        }
    }
}

// Serialization: {"rational": [p, q]} (numbers when small, strings otherwise)
// or {"real": "0.<digits>"}.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
enum AngleRepr {
    #[serde(rename = "rational")]
    Rational([serde_json::Value; 2]),
    #[serde(rename = "real")]
    Real(String),
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Angle::Rational(r) => {
                let num_to_value = |b: &BigInt| -> serde_json::Value {
                    match b.to_i64() {
                        Some(v) if v.abs() < (1i64 << 53) => serde_json::json!(v),
                        _ => serde_json::json!(b.to_string()),
                    }
                };
                AngleRepr::Rational([num_to_value(r.numer()), num_to_value(r.denom())])
            }
            Angle::Fixed(f) => AngleRepr::Real(f.to_decimal_string(DECIMAL_DIGITS)),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = AngleRepr::deserialize(deserializer)?;
        let parse_big = |v: &serde_json::Value| -> std::result::Result<BigInt, D::Error> {
            if let Some(i) = v.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(s) = v.as_str() {
                s.parse::<BigInt>()
                    .map_err(|e| D::Error::custom(format!("bad integer '{s}': {e}")))
            } else {
                Err(D::Error::custom("rational entries must be integers or strings"))
            }
        };
        match repr {
            AngleRepr::Rational([p, q]) => {
                let p = parse_big(&p)?;
                let q = parse_big(&q)?;
                if q.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                Angle::from_big_rational(BigRational::new(p, q))
                    .map_err(|e| D::Error::custom(e.to_string()))
            }
            AngleRepr::Real(s) => {
                Angle::from_decimal_str(&s).map_err(|e| D::Error::custom(e.to_string()))
            }
        }
    }
}

/// Helper for exact fraction bits of sqrt-type roots used by tests.
pub fn root_fraction(num: u64, den: u64, degree: u32) -> Result<(u64, Frac128)> {
    Frac128::root_of_ratio(&BigUint::from(num), &BigUint::from(den), degree)
}
