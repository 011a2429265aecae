//! Exact rationals, elements of R/Z, and the mixed exact/float scalar used by
//! lift evaluation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("integer part fits in i64")
}

/// Fractional part in [0, 1).
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a division of the leading bits for huge operands.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// Parses "p/q", "p" or a decimal such as "0.25" into an exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("{s}: zero denominator")));
        }
        return Ok(Q::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(Q::from_integer(n));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    if let Some((int, dec)) = body.split_once('.') {
        let digits = format!("{int}{dec}");
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            let n = BigInt::from_str(&digits).map_err(|e| Error::Parse(e.to_string()))?;
            let d = num_traits::pow(BigInt::from(10), dec.len());
            let v = Q::new(n, d);
            return Ok(if neg { -v } else { v });
        }
    }
    Err(Error::Parse(format!("not a rational: {s:?}")))
}

/// "p/q", or just "p" for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter for rationals written as "p/q" strings.
pub mod q_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// An element of R/Z with rational representative in [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational1(Q);

impl Rational1 {
    pub fn new(num: i64, den: i64) -> Self {
        Self::from_q(&q(num, den))
    }

    pub fn zero() -> Self {
        Rational1(Q::zero())
    }

    /// Reduces any rational mod 1.
    pub fn from_q(x: &Q) -> Self {
        Rational1(frac(x))
    }

    pub fn value(&self) -> &Q {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn neg(&self) -> Self {
        Self::from_q(&-self.0.clone())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::from_q(&(&self.0 * qi(k)))
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }
}

impl fmt::Display for Rational1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(&self.0))
    }
}

impl FromStr for Rational1 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Self::from_q(&parse_q(s)?))
    }
}

impl Serialize for Rational1 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational1 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the real line, either exact or floating.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Q),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(x) => to_f64(x),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Q> {
        match self {
            Scalar::Exact(x) => Some(x),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn add_int(&self, n: i64) -> Scalar {
        match self {
            Scalar::Exact(x) => Scalar::Exact(x + qi(n)),
            Scalar::Float(x) => Scalar::Float(x + n as f64),
        }
    }

    /// `self - other`, exact when both are.
    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => Scalar::Float(self.to_f64() - other.to_f64()),
        }
    }

    /// Signed comparison `self - other`, exact when possible.
    pub fn cmp_with(&self, other: &Scalar) -> std::cmp::Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()).unwrap_or(std::cmp::Ordering::Equal),
        }
    }

    /// Text used in reports: "p/q" for exact values, a decimal otherwise.
    pub fn render(&self) -> String {
        match self {
            Scalar::Exact(x) => fmt_q(x),
            Scalar::Float(x) => format!("{x:.17e}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl From<Q> for Scalar {
    fn from(x: Q) -> Self {
        Scalar::Exact(x)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

/// Distance in R/Z between two points of the line.
pub fn circle_distance(a: &Scalar, b: &Scalar) -> f64 {
    match (a, b) {
        (Scalar::Exact(a), Scalar::Exact(b)) => {
            let d = frac(&(a - b));
            let d = if d > q(1, 2) { Q::one() - d } else { d };
            to_f64(&d)
        }
        _ => {
            let d = (a.to_f64() - b.to_f64()).rem_euclid(1.0);
            d.min(1.0 - d)
        }
    }
}

/// Reduced p/q with the sign on the numerator.
pub fn reduced(p: i64, q_: i64) -> (i64, i64) {
    let g = p.gcd(&q_).max(1);
    let (p, q_) = (p / g, q_ / g);
    if q_ < 0 {
        (-p, -q_)
    } else {
        (p, q_)
    }
}

pub fn abs_f64(x: &Q) -> f64 {
    to_f64(&x.abs())
}
