//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the spectral machinery is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Reduces `x` to `[-1, 1)` modulo 2 without touching π, so that
/// `sin_pi`/`cos_pi` are exact at integers and half-integers.
#[inline]
fn reduce_mod_two<T: Real>(x: T) -> T {
    let two = lit::<T>(2.0);
    let mut r = x - two * (x / two).floor();
    if r >= T::one() {
        r = r - two;
    }
    r
}

/// `sin(πx)`, exactly zero at integer `x`.
pub fn sin_pi<T: Real>(x: T) -> T {
    let r = reduce_mod_two(x);
    if r == T::zero() || r == -T::one() {
        return T::zero();
    }
    let half = lit::<T>(0.5);
    if r == half {
        return T::one();
    }
    if r == -half {
        return -T::one();
    }
    (T::PI() * r).sin()
}

/// `cos(πx)`, exactly ±1 at integers and zero at half-integers.
pub fn cos_pi<T: Real>(x: T) -> T {
    let r = reduce_mod_two(x);
    if r == T::zero() {
        return T::one();
    }
    if r == -T::one() {
        return -T::one();
    }
    let half = lit::<T>(0.5);
    if r == half || r == -half {
        return T::zero();
    }
    (T::PI() * r).cos()
}

/// `ln sinh(x)` for `x > 0`, finite far beyond the overflow point of `sinh`.
pub(crate) fn ln_sinh<T: Real>(x: T) -> T {
    // sinh x = e^x (1 - e^{-2x}) / 2
    x + (-(lit::<T>(-2.0) * x).exp_m1()).ln() - T::LN_2()
}

/// `sinh(x) e^{-x}` for `x >= 0`.
#[inline]
pub(crate) fn sinh_scaled<T: Real>(x: T) -> T {
    -(lit::<T>(-2.0) * x).exp_m1() / lit(2.0)
}

/// `cosh(x) e^{-|x|}`.
#[inline]
pub(crate) fn cosh_scaled<T: Real>(x: T) -> T {
    (T::one() + (lit::<T>(-2.0) * x.abs()).exp()) / lit(2.0)
}

/// Tolerance for "|Φ| = 1" decisions: `1e-9` in double precision, looser in single.
pub fn level_tolerance<T: Real>() -> T {
    lit::<T>(1e-9).max(T::epsilon() * lit(1e3))
}

/// Bisection accuracy target in the spectral variable (`1e-10` in double precision).
pub fn root_tolerance<T: Real>() -> T {
    lit::<T>(1e-10).max(T::epsilon() * lit(16.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_pi_exact_at_integers() {
        for n in -50..=50 {
            assert_eq!(sin_pi(n as f64), 0.0);
            assert_eq!(cos_pi(n as f64).abs(), 1.0);
            assert_eq!(cos_pi(n as f64), if n % 2 == 0 { 1.0 } else { -1.0 });
            assert_eq!(cos_pi(n as f64 + 0.5), 0.0);
        }
        assert_eq!(sin_pi(0.5_f64), 1.0);
        assert_eq!(sin_pi(1.5_f64), -1.0);
    }

    #[test]
    fn sin_pi_matches_library_away_from_integers() {
        for i in 0..1000 {
            let x = -7.3 + 0.0147 * i as f64;
            assert!((sin_pi(x) - (std::f64::consts::PI * x).sin()).abs() < 1e-13);
            assert!((cos_pi(x) - (std::f64::consts::PI * x).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn log_hyperbolics() {
        for &x in &[1e-8, 1e-3, 0.5, 3.0, 40.0] {
            assert!((ln_sinh(x) - f64::sinh(x).ln()).abs() < 1e-12 * (1.0 + x));
            assert!((sinh_scaled(x) - f64::sinh(x) * (-x).exp()).abs() < 1e-15);
            assert!((cosh_scaled(x) - f64::cosh(x) * (-x).exp()).abs() < 1e-15);
        }
        assert!((ln_sinh(1000.0_f64) - (1000.0 - std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn tolerances_per_precision() {
        assert_eq!(level_tolerance::<f64>(), 1e-9);
        assert!(level_tolerance::<f32>() > 1e-5);
        assert_eq!(root_tolerance::<f64>(), 1e-10);
    }
}
