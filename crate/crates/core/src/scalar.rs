//! Floating-point abstraction shared by the solvers and the engine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar usable for rank computations: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from a count, used for `1 / outdeg` style weights.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as float")
    }

    /// Lossy conversion from `f64`, used for literals and parsed input.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable as float")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
}

/// Largest absolute entrywise difference between two slices.
pub fn max_abs_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).abs())
        .fold(T::zero(), T::max)
}

pub fn max_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|x| x.abs()).fold(T::zero(), T::max)
}

pub fn l1_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|x| x.abs()).sum()
}
