//! Exact rationals backed by `num-rational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRatError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d`, reduced. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn big_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn to_integer(r: &Rat) -> Option<BigInt> {
    is_integer(r).then(|| r.numer().clone())
}

pub fn to_i64(r: &Rat) -> Option<i64> {
    to_integer(r).and_then(|n| n.to_i64())
}

/// True when `2r` is an odd integer.
pub fn is_half_odd(r: &Rat) -> bool {
    let twice = r * int(2);
    is_integer(&twice) && twice.numer().is_odd()
}

/// Canonical `num/den` text; the denominator is always written, `3` is `3/1`.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `n`, `n/d` and `-n/d` with optional surrounding whitespace.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRatError::Empty);
    }
    let parse_int = |part: &str| -> Result<BigInt, ParseRatError> {
        let part = part.trim();
        let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRatError::Invalid(s.to_string()));
        }
        part.parse::<BigInt>()
            .map_err(|_| ParseRatError::Invalid(s.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(ParseRatError::ZeroDenominator(s.to_string()));
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Least common multiple of the denominators, `1` for an empty slice.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}
