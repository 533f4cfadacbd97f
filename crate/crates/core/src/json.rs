//! Canonical text forms for exact numbers crossing the JSON boundary.
//!
//! Rationals are always strings `"p/q"` with `q > 0` and `gcd(p, q) = 1`
//! (written `"p"` when `q = 1`). Integers are JSON numbers below 2^53 in
//! absolute value and decimal strings otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serializer;

const SAFE_INTEGER_BITS: u64 = 53;

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"p"`, `"p/q"` or a terminating decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| err())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let f: BigInt = frac.parse().map_err(|_| err())?;
        let magnitude = int.abs() * &scale + f;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(numer, scale));
    }
    let p: BigInt = t.parse().map_err(|_| err())?;
    Ok(BigRational::from_integer(p))
}

pub fn serialize_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    if n.bits() < SAFE_INTEGER_BITS {
        let v = i64::try_from(n).expect("fits in 53 bits");
        s.serialize_i64(v)
    } else {
        s.serialize_str(&n.to_string())
    }
}

pub fn serialize_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub fn serialize_rational_vec<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// JSON value for an integer under the same number/string rule.
pub fn bigint_value(n: &BigInt) -> serde_json::Value {
    if n.bits() < SAFE_INTEGER_BITS {
        serde_json::Value::from(i64::try_from(n).expect("fits in 53 bits"))
    } else {
        serde_json::Value::String(n.to_string())
    }
}
