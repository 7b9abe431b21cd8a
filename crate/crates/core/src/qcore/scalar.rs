//! The scalar field abstraction shared by the quaternion solvers and the
//! real-counterpart baselines.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use super::quaternion::{Quaternion, INVERSE_EPSILON};
use crate::error::{Error, Result};

/// A (possibly noncommutative) division ring over `f64`.
///
/// Only the operations the Krylov machinery needs are exposed. Products are
/// never reordered by generic code, so quaternions are handled correctly.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Name of the field, echoed in reports.
    const FIELD: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
    /// Magnitude; for reals the absolute value.
    fn modulus(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn is_finite(self) -> bool;
    fn try_inv(self) -> Result<Self>;
    /// Real components, in storage order.
    fn components(self) -> Vec<f64>;
}

impl Scalar for Quaternion {
    const FIELD: &'static str = "quaternion";

    #[inline]
    fn zero() -> Self {
        Quaternion::ZERO
    }
    #[inline]
    fn one() -> Self {
        Quaternion::ONE
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        Quaternion::real(x)
    }
    #[inline]
    fn conj(self) -> Self {
        Quaternion::conj(self)
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        Quaternion::scale(self, s)
    }
    #[inline]
    fn is_finite(self) -> bool {
        Quaternion::is_finite(self)
    }
    fn try_inv(self) -> Result<Self> {
        Quaternion::try_inv(self)
    }
    fn components(self) -> Vec<f64> {
        self.to_array().to_vec()
    }
}

impl Scalar for f64 {
    const FIELD: &'static str = "real";

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn try_inv(self) -> Result<Self> {
        if self.abs() < INVERSE_EPSILON {
            return Err(Error::ZeroDivide {
                magnitude: self.abs(),
            });
        }
        Ok(1.0 / self)
    }
    fn components(self) -> Vec<f64> {
        vec![self]
    }
}
