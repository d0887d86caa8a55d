//! Numeric abstraction for valuations, costs, welfare and payments.
//!
//! Every quantity in a market is a sum or difference of bids and edge costs,
//! so the engine only needs an ordered signed field. `f64` is the default
//! working type; [`Rational`] gives exact arithmetic for oracle runs where
//! floating-point ties would otherwise be decided by rounding noise.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact rational scalar.
pub type Rational = Ratio<i64>;

pub trait Scalar:
    Copy
    + PartialOrd
    + Debug
    + Display
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Absolute tolerance used by verification comparisons.
    fn tolerance() -> Self;

    /// Converts a decimal literal (as read from a market file) into this type.
    fn from_decimal(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(self) -> bool {
        true
    }

    fn lit(x: i32) -> Self {
        Self::from_i32(x).expect("small integer literal")
    }

    fn approx_eq(self, other: Self) -> bool {
        (self - other).abs() <= Self::tolerance()
    }

    /// `self >= other` up to tolerance.
    fn approx_ge(self, other: Self) -> bool {
        self >= other - Self::tolerance()
    }

    /// `self > other` by more than the tolerance.
    fn definitely_gt(self, other: Self) -> bool {
        self > other + Self::tolerance()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn half(self) -> Self {
        self / Self::lit(2)
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }

    fn from_decimal(x: f64) -> Self {
        x
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-4
    }

    fn from_decimal(x: f64) -> Self {
        x as f32
    }

    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Rational {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }

    // Inputs are decimals with a handful of fractional digits. Snapping to a
    // 1e-9 grid recovers e.g. 0.1 as 1/10 and keeps denominators small enough
    // that sums of many terms stay inside i64; a continued-fraction fit of
    // binary noise like 11.171000000000001 does not.
    fn from_decimal(x: f64) -> Self {
        const GRID: i64 = 1_000_000_000;
        let scaled = (x * GRID as f64).round();
        assert!(
            scaled.is_finite() && scaled.abs() < i64::MAX as f64,
            "{x} is outside the exact scalar range"
        );
        Ratio::new(scaled as i64, GRID)
    }
}

pub(crate) fn cmp<S: Scalar>(a: &S, b: &S) -> std::cmp::Ordering {
    a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_recovers_two_decimal_values() {
        assert_eq!(Rational::from_decimal(0.1), Ratio::new(1, 10));
        assert_eq!(Rational::from_decimal(12.37), Ratio::new(1237, 100));
        assert_eq!(Rational::from_decimal(-3.0), Ratio::from_integer(-3));
        assert_eq!(
            Rational::from_decimal(11.171000000000001),
            Ratio::new(11171, 1000)
        );
    }

    #[test]
    fn tolerance_comparisons() {
        assert!((0.1f64 + 0.2).approx_eq(0.3));
        assert!(!(0.3f64).definitely_gt(0.1 + 0.2));
        assert!(Rational::lit(1).definitely_gt(Ratio::new(999_999, 1_000_000)));
        assert!(f32::lit(3).approx_ge(2.99995));
    }

    #[test]
    fn nan_is_not_finite() {
        assert!(!f64::NAN.is_finite_value());
        assert!(Rational::lit(5).is_finite_value());
    }
}
