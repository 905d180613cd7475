//! Scalar abstraction for the numeric kernels.
//!
//! The quadrature, potential-function, and simplex code is generic over the
//! floating-point type; `f64` is the type used everywhere by the simulation
//! and benchmark layers (see the aliases at the crate root).

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + std::iter::Sum
    + std::ops::AddAssign
    + std::ops::SubAssign
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` constant into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable")
    }

    /// `1 - 1/e`, the right boundary value shared by all potential functions.
    #[inline]
    fn one_minus_inv_e() -> Self {
        Self::lit(1.0 - std::f64::consts::E.recip())
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
