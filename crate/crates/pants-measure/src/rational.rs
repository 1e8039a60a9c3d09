//! Exact rational scalars and their textual form.
//!
//! All quantities in this crate (masses, weights, measure values, filtration
//! times) are rationals with arbitrary-precision integer parts.  They cross
//! the JSON boundary as strings `"p/q"` (or `"p"` when the value is an
//! integer), never as floats, so results are bit-for-bit reproducible.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number used throughout the crate.
pub type Rational = num::BigRational;

/// Failure to read a rational from its textual `"p/q"` form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}: expected \"p\" or \"p/q\"")]
    Malformed(String),
    #[error("rational literal {0:?} has a non-positive denominator")]
    NonPositiveDenominator(String),
}

/// Shorthand for small rational constants.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"` (q > 0) or a bare integer `"p"`; the result is reduced.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let malformed = || RationalParseError::Malformed(text.to_owned());
    match trimmed.split_once('/') {
        None => {
            let p: BigInt = trimmed.parse().map_err(|_| malformed())?;
            Ok(Rational::from_integer(p))
        }
        Some((num_text, den_text)) => {
            let p: BigInt = num_text.trim().parse().map_err(|_| malformed())?;
            let q: BigInt = den_text.trim().parse().map_err(|_| malformed())?;
            if q <= BigInt::zero() {
                return Err(RationalParseError::NonPositiveDenominator(text.to_owned()));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Renders a rational in its canonical reduced form.
///
/// Integers print without a denominator ("1", "-3"); everything else prints
/// as "p/q" with q > 0.  `parse_rational` accepts both shapes.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Exact decimal rendering with `places` digits after the point, truncated
/// toward zero.  Display-only: the authoritative serialization stays "p/q".
pub fn decimal_string(value: &Rational, places: u32) -> String {
    let sign = if value.is_negative() { "-" } else { "" };
    let abs = value.abs();
    let scale = BigInt::from(10u8).pow(places);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let whole = &scaled / &scale;
    let frac = &scaled % &scale;
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac:0>width$}", width = places as usize)
    }
}

/// Serde adapter serializing rationals as `"p/q"` strings.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        format_rational(value).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(de)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Checks that `value` lies in the closed interval [0, 1].
pub fn in_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}
