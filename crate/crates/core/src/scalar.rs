//! Scalar abstraction so the toolkit works with `f32` or `f64` samples.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point sample type accepted by every operation in this crate.
///
/// Blanket-implemented for anything float-like that rustfft can transform,
/// which in practice means `f32` and `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + rustfft::FftNum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` constant (tables, tolerances, critical values) into `Self`.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant must convert")
    }

    /// Widen to `f64` for distribution functions computed in double precision.
    fn to64(self) -> f64 {
        self.to_f64().expect("scalar must convert to f64")
    }

    /// Convert a sample count.
    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("usize must convert to scalar")
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + rustfft::FftNum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
