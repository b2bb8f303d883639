//! Scalar traits shared by the exact and floating-point layers.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Float, FloatConst, FromPrimitive, One, Zero};

/// Commutative ring with exact equality: integers, rationals, or floats used as a ring.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {}

impl<T: Ring + Div<Output = T>> Field for T {}

/// Floating-point scalar used by the geometric and numerical layers (f32 or f64).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + Sum + 'static
{
    /// Converts an `f64` literal; exact for f64, rounded for f32.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts an exact value through its nearest `f64`.
    fn from_exact<V: num_traits::ToPrimitive>(v: &V) -> Self {
        Self::lit(v.to_f64().unwrap_or(f64::NAN))
    }
}

impl Real for f32 {}
impl Real for f64 {}
