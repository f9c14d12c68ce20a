use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar used throughout the crate: `f32` or `f64`.
///
/// Everything numeric (polynomials, amplitudes, channel coefficients) is
/// generic over this trait so the whole pipeline can run in either
/// precision. The stated tolerances assume `f64`.
pub trait Scalar:
    Float + FloatConst + NumAssign + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal; panics only for values outside the
    /// target type's range, which never happens for the constants used here.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// Converts a `usize` (bit masks, counts) into the scalar type.
    #[inline]
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("count not representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + NumAssign
        + FromPrimitive
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
