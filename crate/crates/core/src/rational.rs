//! Exact rational helpers shared by every module.
//!
//! All times, delays, shift amounts and bounds are [`Rational`]s. Textual
//! form is canonical: a fully reduced `num/den` with a positive
//! denominator, or a bare integer when the denominator is 1.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"n"`, `"-n"`, or `"n/d"` (d > 0). Input need not be reduced.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational literal: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let valid_digits = |s: &str, signed: bool| {
        let body = if signed { s.strip_prefix('-').unwrap_or(s) } else { s };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_digits(num, true) || !valid_digits(den, false) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(value: &Rational) -> String {
    // `Ratio` keeps itself reduced with a positive denominator.
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Lossy decimal view for human-facing output only.
pub fn approximate(value: &Rational) -> f64 {
    let num = value.numer().to_f64().unwrap_or(f64::NAN);
    let den = value.denom().to_f64().unwrap_or(f64::NAN);
    num / den
}

pub fn is_positive(value: &Rational) -> bool {
    value.is_positive()
}

/// serde adapter storing a rational as its canonical string.
pub mod serde_text {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_integer_and_fraction_forms() {
        assert_eq!(parse_rational("1").unwrap(), int(1));
        assert_eq!(parse_rational("7/3").unwrap(), ratio(7, 3));
        assert_eq!(parse_rational("-4/6").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational(" 10/5 ").unwrap(), int(2));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "/", "1/", "/2", "1/0", "1.5", "a/b", "1/-2", "--1", "+1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&ratio(12, 10)), "6/5");
        assert_eq!(format_rational(&ratio(-3, 1)), "-3");
        assert_eq!(format_rational(&ratio(0, 7)), "0");
        assert_eq!(format_rational(&ratio(1, -2)), "-1/2");
    }

    proptest! {
        #[test]
        fn text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let q = ratio(n, d);
            let text = format_rational(&q);
            prop_assert_eq!(parse_rational(&text).unwrap(), q);
        }
    }
}
