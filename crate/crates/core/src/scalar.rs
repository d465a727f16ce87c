//! Scalar abstractions.
//!
//! Symbolic work runs over any [`Scalar`] ring (exact rationals in practice,
//! floats for cheap evaluation). Grid numerics run over any [`Real`] float type.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, One, ToPrimitive, Zero};

/// Coefficient ring for homogeneous polynomials.
///
/// Division is only ever by small nonzero integers (characteristic-polynomial
/// recursion), which is exact for rationals.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialEq + FromPrimitive + ToPrimitive + Debug + Send + Sync
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer is representable")
    }

    /// Lossy conversion into a float type.
    fn to_real<F: Real>(&self) -> F {
        F::from_f64(self.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(F::nan)
    }
}

impl<T> Scalar for T where
    T: Num + Neg<Output = T> + Clone + PartialEq + FromPrimitive + ToPrimitive + Debug + Send + Sync
{
}

/// Floating-point type used for evaluation, FFTs and norms (`f32` or `f64`).
pub trait Real:
    Float + FromPrimitive + rustfft::FftNum + Default + Display + LowerExp + Sum + Scalar
{
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal fits the real type")
    }

    fn pi() -> Self {
        Self::of(std::f64::consts::PI)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Parses an exact rational from `"p/q"`, an integer, or a finite decimal
/// such as `"-1.25e-3"`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all_digits).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(if negative { -value } else { value })
}

/// Canonical text of a rational: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Exact rational from a small integer ratio.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("3/4"), Some(ratio(3, 4)));
        assert_eq!(parse_rational("-6/8"), Some(ratio(-3, 4)));
        assert_eq!(parse_rational("0.1"), Some(ratio(1, 10)));
        assert_eq!(parse_rational("-1.25e-2"), Some(ratio(-1, 80)));
        assert_eq!(parse_rational("2E3"), Some(ratio(2000, 1)));
        assert_eq!(parse_rational("7"), Some(ratio(7, 1)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "1e", "/3", "0x10"] {
            assert_eq!(parse_rational(bad), None, "{bad}");
        }
    }

    #[test]
    fn canonical_text_round_trips() {
        for v in [ratio(5, 1), ratio(-2, 3), ratio(0, 1), ratio(123456789, 1000)] {
            assert_eq!(parse_rational(&format_rational(&v)), Some(v));
        }
    }
}
