//! Exact rational scalars.
//!
//! Every entropy value and every coding rate in this crate is an exact
//! rational. The tightness test in the decomposer and core membership both
//! hinge on exact equality, so no floating point appears anywhere in the
//! computational paths. Values are kept in canonical form (positive
//! denominator, fully reduced) by the backing arbitrary-precision rational.

use alloc::string::String;
use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GameError, Result};

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    /// The additive identity.
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    /// The multiplicative identity.
    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// An integer as a rational.
    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numerator / denominator` in canonical form.
    ///
    /// Fails with [`GameError::ZeroDenominator`] when `denominator == 0`.
    pub fn new(numerator: i64, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(GameError::ZeroDenominator);
        }
        Ok(Rat(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        )))
    }

    pub(crate) fn mul_big(&self, k: &BigInt) -> Self {
        Rat(&self.0 * k)
    }

    pub(crate) fn div_big(&self, k: &BigInt) -> Self {
        debug_assert!(!k.is_zero());
        Rat(&self.0 / k)
    }

    /// Numerator of the canonical form (sign-carrying).
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator of the canonical form (always positive).
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// `(numerator, denominator)` as machine integers, when they fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.0.numer().to_i64()?, self.0.denom().to_i64()?))
    }

    /// Nearest double, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Whether the value is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Whether the value is strictly negative.
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Whether the value is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Absolute value.
    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    /// Largest integer `k` with `k <= self`.
    pub(crate) fn floor_int(&self) -> Option<i64> {
        self.0.floor().to_integer().to_i64()
    }

    /// Smallest integer `k` with `k >= self`.
    pub(crate) fn ceil_int(&self) -> Option<i64> {
        self.0.ceil().to_integer().to_i64()
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = GameError;

    /// Parses `"p"` or `"p/q"` with optional surrounding whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || GameError::MalformedRational(String::from(s));
        match s.split_once('/') {
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(n)))
            }
            Some((p, q)) => {
                let n: BigInt = p.trim().parse().map_err(|_| bad())?;
                let d: BigInt = q.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(GameError::ZeroDenominator);
                }
                Ok(Rat(BigRational::new(n, d)))
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<Rat> for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// Shorthand used across the test suites.
#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(-3, -6), rat(1, 2));
        assert_eq!(rat(3, -6), rat(-1, 2));
        assert_eq!(rat(3, -6).to_i64_pair(), Some((-1, 2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(Rat::new(1, 0), Err(GameError::ZeroDenominator));
        assert_eq!("1/0".parse::<Rat>(), Err(GameError::ZeroDenominator));
    }

    #[test]
    fn arithmetic_is_exact() {
        // 9/5 + 5/2 - 19/5 = 1/2, the overlap of two of the fixture sources
        let v = rat(9, 5) + rat(5, 2) - rat(19, 5);
        assert_eq!(v, rat(1, 2));
        assert_eq!(rat(24, 5) - rat(43, 10), rat(1, 2));
        assert_eq!(rat(1, 3) * rat(3, 7), rat(1, 7));
        assert_eq!(rat(1, 3) / rat(3, 7), rat(7, 9));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "7", "-4", "3/10", "-53/20", "24/5"] {
            let v: Rat = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!(" 9 / 5 ".parse::<Rat>().unwrap(), rat(9, 5));
        assert!("a/b".parse::<Rat>().is_err());
    }

    #[test]
    fn ordering_matches_value() {
        assert!(rat(9, 10) < Rat::one());
        assert!(rat(53, 20) > rat(5, 2));
        assert!(rat(-1, 2).is_negative());
        assert!(!Rat::zero().is_positive());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(rat(7, 2).floor_int(), Some(3));
        assert_eq!(rat(7, 2).ceil_int(), Some(4));
        assert_eq!(rat(-7, 2).floor_int(), Some(-4));
        assert_eq!(rat(4, 1).ceil_int(), Some(4));
    }
}
