//! Exact rational numbers and the scalar abstraction shared by the exponent
//! algebra.
//!
//! The certificate machinery is written once against [`Scalar`] and runs in
//! two modes: exact ([`Rational`]) where every strict inequality is decided
//! without tolerance, and `f64` where comparisons carry a relative slack of
//! [`FLOAT_REL_TOL`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Relative tolerance used by float-mode comparisons and identity checks.
pub const FLOAT_REL_TOL: f64 = 1e-12;

/// Largest decimal exponent accepted by [`parse_rational`].
const MAX_DECIMAL_EXPONENT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty number")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("exponent out of range in `{0}`")]
    ExponentRange(String),
    #[error("non-finite value")]
    NonFinite,
}

/// Parses integers (`3`), decimals (`-1.25`, `2.5e-3`) and fractions
/// (`7/5`, `-3/4`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim(), s)?;
        let den = parse_decimal(den.trim(), s)?;
        if Zero::is_zero(&den) {
            return Err(ParseRationalError::ZeroDenominator(s.to_owned()));
        }
        return Ok(num / den);
    }
    parse_decimal(s, s)
}

fn parse_decimal(s: &str, whole: &str) -> Result<Rational, ParseRationalError> {
    let invalid = || ParseRationalError::Invalid(whole.to_owned());
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        Some(_) => (false, s),
        None => return Err(invalid()),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp_text = &body[pos + 1..];
            let exp: i64 = exp_text.parse().map_err(|_| invalid())?;
            if exp.abs() > MAX_DECIMAL_EXPONENT {
                return Err(ParseRationalError::ExponentRange(whole.to_owned()));
            }
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    let digits = format!("{int_part}{frac_part}");
    let scale = exponent - frac_part.len() as i64;
    if scale.abs() > 2 * MAX_DECIMAL_EXPONENT {
        return Err(ParseRationalError::ExponentRange(whole.to_owned()));
    }
    let mut value = Rational::from_integer(BigInt::from_str(&digits).map_err(|_| invalid())?);
    let ten_pow = Rational::from_integer(num_traits::pow(BigInt::from(10), scale.unsigned_abs() as usize));
    if scale >= 0 {
        value *= ten_pow;
    } else {
        value /= ten_pow;
    }
    Ok(if negative { -value } else { value })
}

/// Converts a float to the rational denoted by its shortest round-trip
/// decimal representation, so `1.3_f64` becomes exactly `13/10`.
pub fn rational_from_f64(x: f64) -> Result<Rational, ParseRationalError> {
    if !x.is_finite() {
        return Err(ParseRationalError::NonFinite);
    }
    parse_rational(&format!("{x}"))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Arithmetic needed by the exponent algebra, implemented exactly for
/// [`Rational`] and approximately for `f64`.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    fn from_rational(r: &Rational) -> Self;

    fn as_f64(&self) -> f64;

    fn vanishes(&self) -> bool;

    /// `2^exp` for any integer exponent.
    fn pow2(exp: i32) -> Self;

    /// Division returning `None` for a zero (or, in float mode, non-finite)
    /// quotient.
    fn checked_div(self, rhs: Self) -> Option<Self> {
        if rhs.vanishes() {
            None
        } else {
            Some(self / rhs)
        }
    }

    /// Strict `self < other`; zero slack in exact mode, relative
    /// [`FLOAT_REL_TOL`] in float mode.
    fn lt_strict(&self, other: &Self) -> bool;

    /// Equality, exact or to relative [`FLOAT_REL_TOL`].
    fn same(&self, other: &Self) -> bool;

    fn gt_strict(&self, other: &Self) -> bool {
        other.lt_strict(self)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        ratio(num, den)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn as_f64(&self) -> f64 {
        to_f64(self)
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn pow2(exp: i32) -> Self {
        let p = Rational::from_integer(BigInt::one() << exp.unsigned_abs());
        if exp >= 0 {
            p
        } else {
            p.recip()
        }
    }

    fn lt_strict(&self, other: &Self) -> bool {
        self < other
    }

    fn same(&self, other: &Self) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn vanishes(&self) -> bool {
        *self == 0.0
    }

    fn pow2(exp: i32) -> Self {
        2f64.powi(exp)
    }

    fn checked_div(self, rhs: Self) -> Option<Self> {
        let q = self / rhs;
        (rhs != 0.0 && q.is_finite()).then_some(q)
    }

    fn lt_strict(&self, other: &Self) -> bool {
        other - self > FLOAT_REL_TOL * self.abs().max(other.abs())
    }

    fn same(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_REL_TOL * self.abs().max(other.abs())
    }
}

/// Renders a rational as `num/den` (or `num` for integers).
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational("7/5").unwrap(), ratio(7, 5));
        assert_eq!(parse_rational(" 2.5e-3 ").unwrap(), ratio(1, 400));
        assert_eq!(parse_rational("1E2").unwrap(), ratio(100, 1));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("0.5/2").unwrap(), ratio(1, 4));
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1..2").is_err());
        assert!(parse_rational("-").is_err());
        assert!(parse_rational("1e").is_err());
        assert!(parse_rational("1/2/3").is_err());
        assert!(matches!(
            parse_rational("1e99999"),
            Err(ParseRationalError::ExponentRange(_))
        ));
    }

    #[test]
    fn float_conversion_uses_shortest_decimal() {
        assert_eq!(rational_from_f64(1.3).unwrap(), ratio(13, 10));
        assert_eq!(rational_from_f64(0.5).unwrap(), ratio(1, 2));
        assert_eq!(rational_from_f64(1e-7).unwrap(), ratio(1, 10_000_000));
        assert!(rational_from_f64(f64::NAN).is_err());
    }

    #[test]
    fn strict_comparisons_by_mode() {
        let a = ratio(1, 3);
        let b = ratio(1, 3) + ratio(1, 1_000_000_000_000_000);
        assert!(a.lt_strict(&b));
        assert!(!1.0f64.lt_strict(&(1.0 + 1e-14)));
        assert!(1.0f64.lt_strict(&(1.0 + 1e-10)));
        assert!(0.3f64.same(&(0.1 + 0.2)));
        assert_eq!(Rational::pow2(-3), ratio(1, 8));
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
    }
}
