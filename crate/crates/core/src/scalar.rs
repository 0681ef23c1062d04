//! Scalar values: exact rationals or finite binary64 floats.
//!
//! Matrices are homogeneous in scalar kind. Exact rationals are kept in
//! lowest terms with positive denominator (the `num` crate guarantees
//! this on construction); floats must be finite.

use num::{BigInt, BigRational, FromPrimitive, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::Error;

/// Arithmetic kind of a matrix or sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Exact,
    Float,
}

/// A single entry: exact rational or finite float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Wraps a float, rejecting NaN and infinities.
    pub fn from_f64(x: f64) -> Result<Self, Error> {
        if x.is_finite() {
            Ok(Scalar::Float(x))
        } else {
            Err(Error::NonFiniteEntry(x))
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Scalar::Exact(_) => Kind::Exact,
            Scalar::Float(_) => Kind::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    /// Numeric value; exact rationals round to nearest binary64.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(0.0),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Parses "p/q", a decimal like "1.25", or an integer literal into
    /// an exact rational.
    pub fn parse_exact(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if let Some((whole, frac)) = s.split_once('.') {
            if s.contains('/') {
                return Err(Error::Parse(format!("bad rational `{s}`")));
            }
            let neg = whole.trim_start().starts_with('-');
            let w: BigInt = if whole.is_empty() || whole == "-" {
                BigInt::from(0)
            } else {
                whole
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("bad rational `{s}`")));
            }
            let f: BigInt = frac
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
            let base = num::pow::pow(BigInt::from(10), frac.len());
            let numer = if neg { w * &base - f } else { w * &base + f };
            return Ok(Scalar::Exact(BigRational::new(numer, base)));
        }
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(Scalar::Exact(BigRational::new(n, d)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

/// Lossless conversion of a finite float into a rational.
///
/// Used when irrational entries evaluated in binary64 need to flow into
/// exact determinant computations without further rounding.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite float converts exactly")
}
