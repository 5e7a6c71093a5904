//! Exact rationals.
//!
//! Everything in this crate is computed over [`Rat`], an arbitrary precision
//! rational kept in lowest terms with a positive denominator. The textual form
//! is `p/q` (or a bare integer when `q = 1`); decimals are never accepted.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rat;

/// Builds `num/den` in lowest terms. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Largest integer `<= r`.
pub fn floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Smallest integer `>= r`.
pub fn ceil(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rat) -> Rat {
    r - Rat::from_integer(floor(r))
}

pub fn half(r: &Rat) -> Rat {
    r / int(2)
}

/// Returns the integer value if `r` is integral.
pub fn as_integer(r: &Rat) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// Lossy conversion, only ever used for rendering and float oracles.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // to_f64 can fail on huge numerators; fall back to a scaled quotient.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatParseError {
    #[error("empty number")]
    Empty,
    #[error("decimal notation is not accepted, write `{0}` as a fraction p/q")]
    Decimal(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid number `{0}`")]
    Invalid(String),
}

/// Parses `p`, `-p`, `p/q` or `-p/q` with integer `p` and positive integer `q`.
pub fn parse(text: &str) -> Result<Rat, RatParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    if s.contains(['.', 'e', 'E']) {
        return Err(RatParseError::Decimal(s.to_string()));
    }
    let digits = |t: &str| -> Result<BigInt, RatParseError> {
        let body = t.strip_prefix(['-', '+']).unwrap_or(t);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RatParseError::Invalid(s.to_string()));
        }
        BigInt::from_str(t).map_err(|_| RatParseError::Invalid(s.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(digits(s)?)),
        Some((n, d)) => {
            let n = digits(n.trim())?;
            let d = d.trim();
            if d.starts_with(['-', '+']) {
                return Err(RatParseError::Invalid(s.to_string()));
            }
            let d = digits(d)?;
            if d.is_zero() {
                return Err(RatParseError::ZeroDenominator);
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// `|r|`
pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
