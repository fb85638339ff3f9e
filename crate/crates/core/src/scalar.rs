//! Scalar abstractions shared by the numeric modules.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Converts a literal, panicking only if the type cannot represent it at all.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal not representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field element used for exact or floating density values.
///
/// Implemented for every type with field arithmetic, an ordering and numeric
/// conversions, which covers `f32`, `f64` and `num_rational::Ratio<i64|i128>`.
pub trait Scalar:
    Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync
{
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Send + Sync
{
}
