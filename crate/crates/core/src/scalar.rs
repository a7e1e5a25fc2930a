//! Floating-point abstraction shared by every model in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// Real scalar type the simulation is generic over (`f32` or `f64`).
///
/// The associated constants carry the precision-dependent thresholds used by
/// validation code: tolerances that are meaningful for `f64` are far below
/// the resolution of `f32`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + FftNum + Default + Display + LowerExp + Sum + Debug
{
    /// Slack allowed on passivity, unit-norm and reciprocity checks.
    const VALIDATION_TOL: f64;
    /// Magnitude below which a denominator is treated as a pole.
    const SINGULAR_TOL: f64;
    /// Condition number above which a linear system is rejected.
    const MAX_CONDITION: f64;

    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal is representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable as a float")
    }

    #[inline]
    fn validation_tol() -> Self {
        Self::lit(Self::VALIDATION_TOL)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const VALIDATION_TOL: f64 = 1e-9;
    const SINGULAR_TOL: f64 = 1e-12;
    const MAX_CONDITION: f64 = 1e13;
}

impl Scalar for f32 {
    const VALIDATION_TOL: f64 = 1e-4;
    const SINGULAR_TOL: f64 = 1e-6;
    const MAX_CONDITION: f64 = 1e6;
}

/// `e^{j·phase}`.
#[inline]
pub fn cis<T: Scalar>(phase: T) -> Complex<T> {
    Complex::new(phase.cos(), phase.sin())
}

/// The imaginary unit.
#[inline]
pub fn j<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_phase<T: Scalar>(phase: T) -> T {
    let tau = T::TAU();
    let mut p = phase % tau;
    if p < T::zero() {
        p = p + tau;
    }
    // `-tiny % tau + tau` can round up to exactly tau
    if p >= tau {
        p = p - tau;
    }
    p
}

/// Wraps an angle difference into `(-π, π]`.
pub fn wrap_signed<T: Scalar>(delta: T) -> T {
    let pi = T::PI();
    let mut p = wrap_phase(delta);
    if p > pi {
        p = p - T::TAU();
    }
    p
}

/// `20·log10|h|`, `-inf` for an exact zero.
#[inline]
pub fn amplitude_db<T: Scalar>(magnitude: T) -> T {
    T::lit(20.0) * magnitude.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(0.0_f64), 0.0);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(5.0 * PI) - PI).abs() < 1e-14);
        assert!(wrap_phase(-1e-20_f64) < 2.0 * PI);
        assert!((wrap_phase(-0.5_f32) - (2.0 * std::f32::consts::PI - 0.5)).abs() < 1e-6);
    }

    #[test]
    fn wrap_signed_range() {
        assert!((wrap_signed(1.5 * PI) + 0.5 * PI).abs() < 1e-14);
        assert!((wrap_signed(PI) - PI).abs() < 1e-14);
        assert!((wrap_signed(-0.25_f64) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn db_of_zero_is_negative_infinity() {
        assert_eq!(amplitude_db(0.0_f64), f64::NEG_INFINITY);
        assert!((amplitude_db(10.0_f64) - 20.0).abs() < 1e-12);
    }
}
