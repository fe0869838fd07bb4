//! Exact rational scalars.
//!
//! Everything exact in the crate runs on arbitrary-precision rationals. Values
//! cross text boundaries (JSON, CLI) as `"p/q"` strings; decimal literals such
//! as `-0.5` are accepted on input and converted exactly.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn half() -> Q {
    q(1, 2)
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Canonical text form: `p/q`, with integers written without a denominator.
pub fn fmt_q(v: &Q) -> String {
    v.to_string()
}

/// Parses `p/q`, an integer, or a finite decimal literal into an exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::invalid("empty rational literal"));
    }
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad numerator in `{s}`")))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad denominator in `{s}`")))?;
        if den.is_zero() {
            return Err(Error::invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(Q::new(num, den));
    }
    if let Some((int_part, frac)) = t.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(Error::invalid(format!("bad decimal literal `{s}`")));
        }
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
        let mag: BigInt = digits
            .parse()
            .map_err(|_| Error::invalid(format!("bad decimal literal `{s}`")))?;
        let den = num::pow(BigInt::from(10), frac.len());
        let v = Q::new(mag, den);
        return Ok(if neg { -v } else { v });
    }
    let v: BigInt = t
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational literal `{s}`")))?;
    Ok(Q::from_integer(v))
}

pub fn is_integer(v: &Q) -> bool {
    v.is_integer()
}

/// True when `2v` is an integer.
pub fn is_half_integer(v: &Q) -> bool {
    (v * qi(2)).is_integer()
}

pub fn floor_i64(v: &Q) -> i64 {
    v.floor().to_integer().to_i64().expect("floor fits in i64")
}

pub fn ceil_i64(v: &Q) -> i64 {
    v.ceil().to_integer().to_i64().expect("ceil fits in i64")
}

/// `(-1)^k` as a rational.
pub fn sign_pow(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn abs(v: &Q) -> Q {
    v.abs()
}

/// Rising factorial `(x)_k = x (x+1) ... (x+k-1)`.
pub fn pochhammer(x: &Q, k: u32) -> Q {
    let mut acc = Q::one();
    for t in 0..k {
        acc *= x + qi(t as i64);
    }
    acc
}

/// Half-integers `lo, lo + 1/2, ..., hi` (both ends rounded inward to the grid).
pub fn half_integer_grid(lo: &Q, hi: &Q) -> Vec<Q> {
    let start = ceil_i64(&(lo * qi(2)));
    let end = floor_i64(&(hi * qi(2)));
    (start..=end).map(|k| q(k, 2)).collect()
}
