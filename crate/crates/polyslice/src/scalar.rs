use core::fmt::{Debug, Display};
use core::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, NumCast};

/// Real scalar accepted by the geometry and integration routines.
///
/// Implemented for `f32` and `f64`. Tolerances throughout the crate are tuned
/// for `f64`; `f32` works but only at single-precision accuracy.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumCast + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 literal fits the scalar type")
    }

    #[inline]
    fn of_usize(k: usize) -> Self {
        <Self as FromPrimitive>::from_usize(k).expect("integer fits the scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `k!` as a scalar.
pub fn factorial<T: Scalar>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * T::of_usize(j))
}

pub(crate) fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).map(|(&a, &b)| a * b).sum()
}

pub(crate) fn norm<T: Scalar>(x: &[T]) -> T {
    dot(x, x).sqrt()
}
