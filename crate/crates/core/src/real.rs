use std::fmt::{Debug, Display};
use std::sync::OnceLock;

use num_traits::{Float, FloatConst, FromPrimitive};

use crate::critical::Constants;

/// Scalar type the numeric code is written against: `f32` or `f64`.
///
/// Everything in this crate that evaluates digit sums, brackets roots or
/// compares against margins is generic over `Real`. The concrete `f64`
/// aliases at the crate root are what the CLI and most callers use.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    fn lit(x: f64) -> Self;

    /// Boundary constants for this scalar type, computed on first use.
    fn constants() -> &'static Constants<Self>;
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    fn constants() -> &'static Constants<f64> {
        static CONSTANTS: OnceLock<Constants<f64>> = OnceLock::new();
        CONSTANTS.get_or_init(Constants::compute)
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    fn constants() -> &'static Constants<f32> {
        static CONSTANTS: OnceLock<Constants<f32>> = OnceLock::new();
        CONSTANTS.get_or_init(Constants::compute)
    }
}
