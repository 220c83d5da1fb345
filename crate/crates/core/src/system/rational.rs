//! Exact rational helpers: literal parsing, exact float ingestion and the
//! string form used in JSON documents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SystemError;

/// Parses `"3"`, `"-3/2"` or a plain decimal such as `"0.125"` exactly.
pub fn parse(text: &str) -> Result<BigRational, SystemError> {
    let bad = || SystemError::BadRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if frac.is_empty() && int_digits.is_empty() {
            return Err(bad());
        }
        if !frac.chars().all(|ch| ch.is_ascii_digit())
            || !int_digits.chars().all(|ch| ch.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Exact binary-to-rational conversion of a finite `f64`.
pub fn from_f64(x: f64) -> Result<BigRational, SystemError> {
    BigRational::from_float(x).ok_or(SystemError::NonFinite)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `"p/q"` or `"p"` when the denominator is one.
pub fn to_text(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational that serializes as its canonical string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatText(pub BigRational);

impl Serialize for RatText {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&to_text(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Text(String),
            Int(i64),
            Float(f64),
        }
        let value = match Lit::deserialize(deserializer)? {
            Lit::Text(s) => parse(&s),
            Lit::Int(n) => Ok(int(n)),
            Lit::Float(x) => from_f64(x),
        };
        value.map(RatText).map_err(serde::de::Error::custom)
    }
}

impl From<BigRational> for RatText {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}
