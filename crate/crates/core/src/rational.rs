//! Exact rational scalars and their wire format.
//!
//! Rationals travel as strings: `"p/q"` or a bare integer `"p"`. Floats are
//! rejected on input.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Input("empty rational literal".into()));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |s: &str| -> Result<BigInt> {
        s.parse::<BigInt>()
            .map_err(|_| Error::Input(format!("not an exact rational: {text:?}")))
    };
    let n = parse_int(num)?;
    let d = match den {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Input(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(n, d))
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Sign factor `(-1)^k`.
pub fn sign(negative: bool) -> Rational {
    if negative {
        -one()
    } else {
        one()
    }
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Serde adapter: a single rational as a string.
pub mod as_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: a list of rows of rationals as nested string arrays.
pub mod rows_as_strings {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<Vec<String>> = rows
            .iter()
            .map(|r| r.iter().map(super::format).collect())
            .collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let text = Vec::<Vec<String>>::deserialize(d)?;
        text.iter()
            .map(|row| {
                row.iter()
                    .map(|t| super::parse(t).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Serde adapter: a vector of rationals as a string array.
pub mod vec_as_strings {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<String> = v.iter().map(super::format).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let text = Vec::<String>::deserialize(d)?;
        text.iter()
            .map(|t| super::parse(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
