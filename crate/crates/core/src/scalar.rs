//! Scalar contract shared by the exact, prime-field, floating and dual-number paths.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;

/// Field operations needed by the Hamiltonian, the Backlund maps and the
/// flow. Division by an exact zero panics; callers guard singular loci with
/// [`Scalar::is_negligible`] first.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn is_zero(&self) -> bool;

    /// Singularity test for denominators. Exact types ignore `threshold` and
    /// test for zero; floats compare the magnitude against it; dual numbers
    /// look at their value part only.
    fn is_negligible(&self, threshold: f64) -> bool {
        let _ = threshold;
        self.is_zero()
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_negligible(&self, threshold: f64) -> bool {
        self.is_nan() || self.abs() < threshold
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Lossy conversion used when handing exact data to the float integrator.
pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"num/den"`, `"num"` or a decimal literal such as `"0.25"` into an
/// exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if let Ok(r) = t.parse::<Rational>() {
        return Some(r);
    }
    if t.contains(['.', 'e', 'E']) {
        let x: f64 = t.parse().ok()?;
        return Rational::from_float(x);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_strings() {
        assert_eq!(parse_rational("1/3"), Some(Rational::from_ratio(1, 3)));
        assert_eq!(parse_rational("-4/6"), Some(Rational::from_ratio(-2, 3)));
        assert_eq!(parse_rational(" 7 "), Some(Rational::from_i64(7)));
        assert_eq!(parse_rational("0.5"), Some(Rational::from_ratio(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn float_negligible_catches_nan() {
        assert!(f64::NAN.is_negligible(1e-12));
        assert!(1e-13f64.is_negligible(1e-12));
        assert!(!1e-3f64.is_negligible(1e-12));
    }
}
