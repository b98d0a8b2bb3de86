//! Exact scalar arithmetic.
//!
//! All solver values are [`Rational`] (arbitrary-precision, always canonical:
//! reduced, positive denominator). [`ExtReal`] adjoins `-inf`/`+inf` for
//! fixpoint bookkeeping; extended values are compared, never added.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision rational, canonical form maintained by the backing type.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {0:?} as a rational")]
    BadRational(String),
    #[error("cannot parse {0:?} as an extended real")]
    BadExtReal(String),
}

/// Builds the canonical rational n/d, rejecting d = 0.
pub fn normalize(n: BigInt, d: BigInt) -> Result<Rational, NumericError> {
    if d.is_zero() {
        return Err(NumericError::ZeroDenominator);
    }
    Ok(Rational::new(n, d))
}

/// Shorthand for small rationals; panics on d = 0.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "rat: zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for integers as rationals.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "p/q" or "p" (q > 0 not required; the sign is normalized).
pub fn parse_rational(s: &str) -> Result<Rational, NumericError> {
    let bad = || NumericError::BadRational(s.to_string());
    let mut parts = s.splitn(2, '/');
    let num_str = parts.next().ok_or_else(bad)?.trim();
    let n = BigInt::from_str(num_str).map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Rational::from_integer(n)),
        Some(den_str) => {
            let d = BigInt::from_str(den_str.trim()).map_err(|_| bad())?;
            normalize(n, d)
        }
    }
}

/// Rational extended with two infinities. The derived order puts
/// `-inf` below every finite value and `+inf` above.
///
/// Arithmetic on infinite values is deliberately not provided; they exist
/// only to be compared and printed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtReal {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtReal {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::Finite(r)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(r) => write!(f, "{r}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}

pub fn parse_ext_real(s: &str) -> Result<ExtReal, NumericError> {
    match s.trim() {
        "inf" | "+inf" => Ok(ExtReal::PosInf),
        "-inf" => Ok(ExtReal::NegInf),
        other => parse_rational(other)
            .map(ExtReal::Finite)
            .map_err(|_| NumericError::BadExtReal(s.to_string())),
    }
}

/// True iff r = 1.
pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}

/// True iff r ≥ 0.
pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}

/// Nearest f64 (NaN when the magnitude exceeds the double range).
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
