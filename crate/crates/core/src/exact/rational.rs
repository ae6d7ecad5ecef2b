//! Exact rational scalars and the helpers the rest of the crate leans on.
//!
//! [`Rational`] is `num_rational::BigRational`, which normalizes eagerly on
//! every operation, so structural equality is canonical equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Integer power with a possibly negative exponent.
pub fn powi(x: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let mag = e.unsigned_abs();
    let p: Rational = Pow::pow(x, mag);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Bit height `max(bits(|num|), bits(den))`, used to rank pivots.
pub fn height(x: &Rational) -> u64 {
    x.numer().bits().max(x.denom().bits())
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.375` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i64;
    let mut value = Rational::from_integer(all) * powi(&int(10), scale);
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Finite q-shifted factorial `(a; q)_n = (1 - a)(1 - aq)...(1 - aq^{n-1})`.
pub fn qpoch(a: &Rational, q: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut aqk = a.clone();
    for _ in 0..n {
        acc *= Rational::one() - &aqk;
        aqk *= q;
    }
    acc
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Serde adapter writing a rational as its canonical string.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for a sequence of rationals as strings.
pub mod serde_str_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qpoch_small_cases() {
        let a = rat(3, 7);
        let q = rat(1, 2);
        assert_eq!(qpoch(&a, &q, 0), int(1));
        assert_eq!(qpoch(&a, &q, 1), int(1) - &a);
        assert_eq!(qpoch(&rat(1, 2), &rat(1, 2), 2), rat(3, 8));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("0.6").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("-.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("2.5e-1").unwrap(), rat(1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn negative_powers() {
        assert_eq!(powi(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(powi(&rat(2, 3), 0), int(1));
    }
}
