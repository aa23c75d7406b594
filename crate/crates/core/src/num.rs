//! Scalar abstraction for the numeric kernels.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the DSP kernels are generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + rustfft::FftNum + std::iter::Sum + std::fmt::Display
{
    /// Shorthand for converting an `f64` literal into the scalar type.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    fn to_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
