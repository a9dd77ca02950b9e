//! Exact rational helpers shared by the counters, the rewrites and the formulas.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative exact rational produced by a matching count.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactCount(pub BigRational);

impl ExactCount {
    pub fn zero() -> Self {
        ExactCount(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactCount(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactCount(BigRational::from_integer(n.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.0.is_integer().then(|| self.0.to_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for ExactCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl From<BigRational> for ExactCount {
    fn from(v: BigRational) -> Self {
        ExactCount(v)
    }
}

impl From<BigUint> for ExactCount {
    fn from(v: BigUint) -> Self {
        ExactCount(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<u64> for ExactCount {
    fn from(v: u64) -> Self {
        ExactCount::from_integer(v)
    }
}

impl Serialize for ExactCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s)
            .map(ExactCount)
            .map_err(serde::de::Error::custom)
    }
}

/// Formats a rational as `p` when integral and `p/q` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a terminating decimal such as `0.5`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = whole.abs() * &scale + frac;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(numer, scale));
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

/// `2^e` as an exact rational; negative exponents give reciprocals.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `2^e` as an integer. Panics on a negative exponent.
pub fn pow2_int(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Splits a nonzero rational into `2^k * r` with `r` having odd numerator and
/// odd denominator.
pub fn split_pow2(v: &BigRational) -> (i64, BigRational) {
    if v.is_zero() {
        return (0, v.clone());
    }
    let numer = v.numer().clone();
    let denom = v.denom().clone();
    let tz_n = numer.magnitude().trailing_zeros().unwrap_or(0) as i64;
    let tz_d = denom.magnitude().trailing_zeros().unwrap_or(0) as i64;
    let rest = BigRational::new(numer >> tz_n as usize, denom >> tz_d as usize);
    (tz_n - tz_d, rest)
}

/// Converts a rational to `f64` (best effort, for reporting only).
pub fn approx_f64(v: &BigRational) -> f64 {
    let n = v.numer().to_f64().unwrap_or(f64::NAN);
    let d = v.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}
