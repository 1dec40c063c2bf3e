//! Floating-point scalar abstraction: every numeric kernel in this crate is
//! generic over [`Scalar`], instantiated as `f32` or `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar: f32 or f64.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + FromStr + Sum + Display + Debug + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion from f64 used for constants and defaults.
    fn from_f64_c(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
