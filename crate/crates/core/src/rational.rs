//! Exact rationals and their string form.
//!
//! Rationals travel through JSON as `"p/q"` strings (or `"p"` when the
//! denominator is 1). Parsing never panics: zero denominators, empty parts and
//! stray characters are all reported as [`Error::InvalidRational`].

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Upper bound on digits accepted per numerator or denominator.
const MAX_DIGITS: usize = 4096;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn pow2(exp: u32) -> Rational {
    Rational::from_integer(BigInt::one() << exp)
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(truncate(text));
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numer = parse_int(numer, true).ok_or_else(bad)?;
    let denom = match denom {
        Some(d) => parse_int(d, false).ok_or_else(bad)?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

fn parse_int(text: &str, allow_sign: bool) -> Option<BigInt> {
    let (negative, digits) = match text.as_bytes().first()? {
        b'-' if allow_sign => (true, &text[1..]),
        b'+' if allow_sign => (false, &text[1..]),
        _ => (false, text),
    };
    if digits.is_empty() || digits.len() > MAX_DIGITS || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let magnitude = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    Some(if negative { -magnitude } else { magnitude })
}

fn truncate(text: &str) -> String {
    text.chars().take(64).collect()
}

pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Lossy rendering for report convenience fields.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        let n = value.numer().to_f64().unwrap_or(f64::NAN);
        let d = value.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact square root, when it is rational.
pub fn sqrt_exact(value: &Rational) -> Option<Rational> {
    if value.is_negative() {
        return None;
    }
    let n = value.numer().sqrt();
    let d = value.denom().sqrt();
    if &(&n * &n) == value.numer() && &(&d * &d) == value.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// `value` as a non-negative integer, if it is one and fits.
pub fn to_u128_exact(value: &BigInt) -> Option<u128> {
    match value.sign() {
        Sign::Minus => None,
        _ => value.to_u128(),
    }
}

pub fn is_positive(value: &Rational) -> bool {
    value.is_positive()
}

/// Serde adapters writing rationals as strings.
pub mod serde_str {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(de::Error::custom)
    }

    pub mod vec {
        use serde::ser::SerializeSeq;
        use serde::Serializer;

        use super::super::{format_rational, Rational};

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&format_rational(v))?;
            }
            seq.end()
        }
    }
}

/// Serializes a rational as `{"exact": "p/q", "approx": float}` for reports.
pub mod serde_report {
    use serde::ser::SerializeStruct;
    use serde::Serializer;

    use super::{format_rational, to_f64, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("exact", &format_rational(value))?;
        st.serialize_field("approx", &to_f64(value))?;
        st.end()
    }

    pub mod option {
        use serde::Serializer;

        use super::super::Rational;

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => super::serialize(v, s),
                None => s.serialize_none(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/2").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" 3 / 9 ").unwrap(), frac(1, 3));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "/", "1/", "/2", "1/0", "1/-2", "a", "1.5", "1//2", "--1", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&frac(2, 4)), "1/2");
        assert_eq!(format_rational(&int(3)), "3");
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_exact(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(sqrt_exact(&int(2)), None);
        assert_eq!(sqrt_exact(&int(0)), Some(int(0)));
    }
}
