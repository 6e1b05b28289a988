//! Scalar abstraction shared by every score-carrying type.
//!
//! Scores, averages, error reductions and rank statistics are generic over
//! [`Scalar`], which is implemented for `f32` and `f64`. Exact quantities
//! (combination counts, hypergeometric probabilities) are computed with
//! big integers and rationals and only converted to a `Scalar` at the end.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, ToPrimitive};

pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Display + Debug + FromStr + Send + Sync + 'static
{
    /// Upper bound of a percentage score.
    fn hundred() -> Self {
        Self::from_u8(100).expect("100 is representable")
    }

    /// Lossy conversion from a usize count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }

    /// Conversion of an exact rational, rounding at the last step.
    fn from_rational(r: &BigRational) -> Self {
        Self::from_f64(r.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(Self::nan)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Display + Debug + FromStr + Send + Sync + 'static
{
}

/// Round to `decimals` fractional digits (half away from zero).
pub fn round_to<S: Scalar>(x: S, decimals: i32) -> S {
    let factor = S::from_f64(10f64.powi(decimals)).unwrap();
    (x * factor).round() / factor
}
