//! Rational numbers over arbitrary-precision integers.
//!
//! `num_rational::BigRational` already keeps every value reduced with a
//! positive denominator, so it is used directly. This module adds the string
//! encoding shared by every JSON format in the crate: `"p"` or `"p/q"`, with
//! plain decimal fractions such as `"0.25"` accepted on input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p"`, `"p/q"` or a finite decimal `"-1.25"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = parse_integer(num).ok_or_else(invalid)?;
        let den: BigInt = parse_integer(den).ok_or_else(invalid)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut numer: BigInt = digits.parse().map_err(|_| invalid())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(numer, denom));
    }
    parse_integer(s)
        .map(Rational::from_integer)
        .ok_or_else(invalid)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical string form; inverse of [`parse_rational`] on canonical input.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn floor_int(value: &Rational) -> BigInt {
    value.numer().div_floor(value.denom())
}

/// Fractional part in `[0, 1)`.
pub fn frac(value: &Rational) -> Rational {
    value - Rational::from_integer(floor_int(value))
}

pub fn to_f64(value: &Rational) -> f64 {
    match (value.numer().to_f64(), value.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge operands: scale down before dividing.
            let bits = value.numer().bits().max(value.denom().bits()) as i64 - 900;
            let shift = bits.max(0) as usize;
            let n = (value.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (value.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if value.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

pub fn is_integer(value: &Rational) -> bool {
    value.denom().is_one()
}

pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(value))
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
    let raw = RationalLiteral::deserialize(deserializer)?;
    raw.into_rational().map_err(serde::de::Error::custom)
}

/// A rational literal as it may appear in hand-written JSON: a string, or a
/// bare integer for convenience.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalLiteral {
    Text(String),
    Integer(i64),
}

impl RationalLiteral {
    pub fn into_rational(self) -> Result<Rational, ParseRationalError> {
        match self {
            RationalLiteral::Text(s) => parse_rational(&s),
            RationalLiteral::Integer(i) => Ok(int(i)),
        }
    }
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[Rational], serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<RationalLiteral>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|r| r.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_rational(""), Err(ParseRationalError::Empty)));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/").is_err());
        assert!(parse_rational("1.").is_err());
        assert!(parse_rational("--1").is_err());
    }

    #[test]
    fn reduced_after_arithmetic() {
        let x = ratio(2, 6) + ratio(1, 6);
        assert_eq!(x.numer(), &BigInt::from(1));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&x), "1/2");
        assert_eq!(format_rational(&ratio(-4, 2)), "-2");
    }

    #[test]
    fn floor_and_frac() {
        assert_eq!(floor_int(&ratio(-1, 3)), BigInt::from(-1));
        assert_eq!(frac(&ratio(-1, 3)), ratio(2, 3));
        assert_eq!(frac(&ratio(7, 3)), ratio(1, 3));
    }
}
