use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar the bound calculators are generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("index fits in the scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `x ln x` with the continuous extension `0 ln 0 = 0`.
    #[inline]
    fn xlnx(self) -> Self {
        if self == Self::zero() {
            Self::zero()
        } else {
            self * self.ln()
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
