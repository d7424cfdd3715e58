//! Scalar abstraction for the numeric core.
//!
//! Everything in this crate that does math is generic over a floating-point
//! scalar so the same code instantiates at `f32` and `f64`. The concrete
//! aliases most callers want live at the crate root.

use std::fmt;

use num_traits::{Float, FloatConst};

/// Floating-point scalar usable throughout the simulator.
///
/// Blanket-implemented for every type with the listed capabilities, in
/// particular `f32` and `f64`.
pub trait Scalar:
    Float + FloatConst + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// Convert an `f64` constant into the working scalar type.
///
/// Panics if the value is not representable, which cannot happen for the
/// finite literals this crate uses.
pub fn real<T: Scalar>(x: f64) -> T {
    T::from(x).expect("finite f64 constant must convert to the scalar type")
}

/// Lossy view of a scalar as `f64`, for diagnostics and error messages.
pub fn approx_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
