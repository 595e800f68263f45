use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the geometry and metric layers are generic over (`f32` or `f64`).
pub trait Scalar: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Angular separation below which two boundary vertices are merged.
    fn dedup_tol() -> Self;

    /// Converts an `f64` literal; panics only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar literal out of range")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Scalar for f32 {
    fn dedup_tol() -> Self {
        64.0 * f32::EPSILON
    }
}

impl Scalar for f64 {
    fn dedup_tol() -> Self {
        1e-13
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle<T: Scalar>(a: T) -> T {
    let tau = T::TAU();
    let mut r = a % tau;
    if r < T::zero() {
        r = r + tau;
    }
    if r >= tau {
        r = r - tau;
    }
    r
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_signed<T: Scalar>(a: T) -> T {
    let pi = T::PI();
    let mut r = wrap_angle(a);
    if r > pi {
        r = r - T::TAU();
    }
    r
}
