//! Scalar abstractions.
//!
//! Simulation code is written once against [`Real`] and instantiated for
//! `f32` and `f64`; closed-form reference values are written against
//! [`RefScalar`] and instantiated for `f64` and exact big rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating point type usable by the statevector simulator.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to any Real")
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

/// Field in which the closed-form moments are evaluated.
pub trait RefScalar: Num + Clone + Debug + PartialOrd {
    fn from_u64(v: u64) -> Self;

    /// Nearest `f64`.
    fn to_f64_lossy(&self) -> f64;

    fn pow2(n: u32) -> Self {
        num_traits::pow(Self::from_u64(2), n as usize)
    }
}

impl RefScalar for f64 {
    fn from_u64(v: u64) -> Self {
        v as f64
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl RefScalar for BigRational {
    fn from_u64(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}
