//! Scalar abstraction for the Gaussian toolkit.
//!
//! Everything on the covariance-matrix side is generic over [`Real`], which is
//! implemented for `f32` and `f64`. Tolerances are written as `f64` literals and
//! converted with [`tol`], which never lets a threshold drop below a few ulps of
//! the working precision.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the covariance-matrix routines.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Default {
    /// Machine epsilon of the type, widened to `f64`.
    const EPSILON: f64;
}

impl Real for f32 {
    const EPSILON: f64 = f32::EPSILON as f64;
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON;
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in target scalar")
}

/// Absolute tolerance `x`, floored at 64 ulps of `T` at unit scale.
#[inline]
pub fn tol<T: Real>(x: f64) -> T {
    lit(x.max(64.0 * T::EPSILON))
}

/// Widens a scalar to `f64` (NaN if the conversion is impossible).
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_floor_depends_on_precision() {
        assert_eq!(tol::<f64>(1e-9), 1e-9);
        assert!(tol::<f32>(1e-12) > 1e-6);
        assert_eq!(lit::<f32>(0.5), 0.5f32);
    }
}
