//! The floating-point abstraction the analytic code is written against.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// A real scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `expm1(x) / x`, continuous at zero.
#[inline]
pub(crate) fn exprel<T: Real>(x: T) -> T {
    if x == T::zero() {
        T::one()
    } else {
        x.exp_m1() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exprel_is_continuous_at_zero() {
        assert_eq!(exprel(0.0_f64), 1.0);
        assert!((exprel(1e-12_f64) - 1.0).abs() < 1e-12);
        assert!((exprel(1.0_f64) - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert!((exprel(-1e-7_f32) - 1.0).abs() < 1e-6);
    }
}
