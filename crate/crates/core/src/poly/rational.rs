//! Exact rational scalars and points.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `p/q` or a plain decimal such as `-0.125` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = |msg: &str| Error::Parse {
        pos: 0,
        msg: format!("{msg}: {s:?}"),
    };
    if s.is_empty() {
        return Err(err("empty rational"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole = whole.trim_start_matches(['-', '+']);
        let whole: BigInt = if whole.is_empty() {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| err("bad decimal"))?
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err("bad decimal"));
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|_| err("bad decimal"))?
        };
        let v = Rational::new(whole * &scale + frac, scale);
        return Ok(if negative { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| err("bad integer"))?;
    Ok(Rational::from_integer(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact value of a finite float.
pub fn from_f64(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(Rational::zero)
}

/// Rounds `v` to the nearest multiple of `2^-bits`.
pub fn dyadic(v: f64, bits: i32) -> Rational {
    let scaled = (v * 2f64.powi(bits)).round();
    let n = BigInt::from(scaled as i128);
    Rational::new(n, num_traits::pow(BigInt::from(2), bits as usize))
}

pub fn ceil_to_u64(r: &Rational) -> u64 {
    r.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
}

pub fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// `⌈count · factor⌉`, exact.
pub fn ceil_scaled(count: usize, factor: &Rational) -> u64 {
    ceil_to_u64(&(Rational::from_integer(BigInt::from(count)) * factor))
}

/// A point of `Q^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Point::new(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(to_f64).collect()
    }

    /// `self + t * dir`.
    pub fn along(&self, dir: &[Rational], t: &Rational) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(dir)
                .map(|(b, v)| b + v * t)
                .collect(),
        )
    }

    pub fn dist_sq(&self, other: &Point) -> Rational {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings<S: AsRef<str>>(coords: &[S]) -> Result<Point> {
        coords
            .iter()
            .map(|c| parse_rational(c.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Point::new)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        Point::from_strings(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for rationals written as `"p/q"` strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        r.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(ratio(4, -8).to_string(), "-1/2");
        assert_eq!(int(7).to_string(), "7");
    }

    #[test]
    fn dyadic_rounding() {
        assert_eq!(dyadic(0.5, 4), ratio(1, 2));
        assert_eq!(dyadic(0.3, 2), ratio(1, 4));
    }

    #[test]
    fn ceil_scaled_matches_hand_values() {
        // 512 * 0.6^7 = 14.33...
        let f = num_traits::pow(ratio(3, 5), 7);
        assert_eq!(ceil_scaled(512, &f), 15);
        assert_eq!(ceil_scaled(24, &ratio(1, 2)), 12);
    }
}
