//! Scalar abstractions: a floating-point trait for the sampling and
//! geometry layers, and an exact-arithmetic trait for closed-form laws
//! whose alternating sums destroy double precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};
use rand::Rng;

/// Floating-point scalar used by instances, routes, laws and samplers.
///
/// `f64` is the workhorse; `f32` is supported for callers that trade
/// precision for memory in large batch studies. Solver modules that carry
/// 1e-8..1e-12 tolerance contracts stay concrete on `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + std::ops::AddAssign
    + std::ops::SubAssign
    + std::ops::MulAssign
    + std::ops::DivAssign
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// One draw of the native uniform law on `[0, 1)`.
    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy conversion from `f64`; values are parameters, not data.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }
}

impl Real for f32 {
    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f32>()
    }
}

impl Real for f64 {
    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f64>()
    }
}

/// Scalar for closed-form CDF evaluation: either fast `f64` or exact
/// `BigRational`. Only ring/field operations, comparisons and powers of
/// two are required, so both fit behind one trait.
pub trait ExactScalar: Num + Clone + PartialOrd {
    /// `2^k` built by doubling (exact in both representations for the
    /// exponents used here).
    fn two_pow(k: u32) -> Self {
        let two = Self::one() + Self::one();
        let mut out = Self::one();
        for _ in 0..k {
            out = out * two.clone();
        }
        out
    }

    /// Conversion from an `f64` argument. Exact for `BigRational` (every
    /// finite double is a binary rational).
    fn from_f64_value(x: f64) -> Self;

    fn to_f64_value(&self) -> f64;
}

impl ExactScalar for f64 {
    fn from_f64_value(x: f64) -> Self {
        x
    }

    fn to_f64_value(&self) -> f64 {
        *self
    }
}

impl ExactScalar for BigRational {
    fn from_f64_value(x: f64) -> Self {
        BigRational::from_float(x).expect("finite f64 is a binary rational")
    }

    fn to_f64_value(&self) -> f64 {
        self.to_f64().expect("ratio fits in f64 range")
    }
}

/// Exact rational from an integer pair, for tests and pinned constants.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
