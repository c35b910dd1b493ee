//! Floating-point abstraction shared by every numerical routine in the crate.

use std::cmp::Ordering;
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Open01, StandardNormal};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar: `f32` or `f64`.
///
/// Random sampling lives on the trait so generic code does not have to carry
/// `StandardNormal: Distribution<T>` bounds around.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform draw on the open interval (0, 1).
    fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Converts an `f64` literal. Panics only if the target cannot represent
    /// finite `f64` values, which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// IEEE total order.
    fn total_order(&self, other: &Self) -> Ordering;

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Scalar for f64 {
    #[inline]
    fn total_order(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }

    #[inline]
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }

    #[inline]
    fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(Open01)
    }
}

impl Scalar for f32 {
    #[inline]
    fn total_order(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }

    #[inline]
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }

    #[inline]
    fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(Open01)
    }
}
