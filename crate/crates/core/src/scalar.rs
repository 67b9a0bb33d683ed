//! Floating-point scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumCast};

/// Real scalar type the solvers are generic over.
///
/// Blanket-implemented for any `Float + FloatConst` type that is also
/// thread-safe, which in practice means `f32` and `f64`.
pub trait Real: Float + FloatConst + Sum + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 literal representable in scalar type")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn from_usize(n: usize) -> Self {
        <Self as NumCast>::from(n).expect("count representable in scalar type")
    }

    /// Widens to `f64` for reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::one() / Self::two()
    }

    #[inline]
    fn sqrt3() -> Self {
        Self::lit(3.0).sqrt()
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }

    /// Tolerance scaled to the precision of the type: `max(tol, 64 eps)`.
    #[inline]
    fn tol_floor(tol: f64) -> Self {
        Self::lit(tol).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl<T> Real for T where T: Float + FloatConst + Sum + Debug + Display + Default + Send + Sync + 'static {}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle<T: Real>(theta: T) -> T {
    let tau = T::two_pi();
    let r = theta % tau;
    let r = if r < T::zero() { r + tau } else { r };
    if r >= tau {
        T::zero()
    } else {
        r
    }
}
