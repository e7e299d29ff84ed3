//! Scalar abstraction for the numeric core.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, NumCast};

/// Floating-point scalar the whole toolkit is generic over (f32 or f64).
///
/// All simulation and analytic code is written against this trait; the
/// crate root exports f64 aliases for the common case.
pub trait Real:
    Float
    + FloatConst
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an f64 constant into the scalar type.
    ///
    /// Used for the numeric literals appearing in closed-form expressions
    /// and quadrature tables; the conversion never fails for finite input.
    fn from_f64(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("finite f64 literal")
    }

    /// Widens the scalar to f64 (for error messages and CSV output).
    fn as_f64(self) -> f64 {
        <f64 as NumCast>::from(self).expect("real scalar fits in f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
