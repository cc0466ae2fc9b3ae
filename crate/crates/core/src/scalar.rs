//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All state vectors, operators and measures are generic over a real
//! floating-point type `T` with complex amplitudes `Complex<T>`. `f64` is the
//! reference precision; `f32` is supported with tolerances widened to the
//! type's machine epsilon.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// Widens a tolerance tuned for double precision so that it is never
    /// tighter than what rounding in `Self` can honour.
    #[inline]
    fn admissible(base: f64) -> f64 {
        base.max(Self::epsilon().as_f64() * 256.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a real scalar.
pub type Amp<T> = Complex<T>;

#[inline]
pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
