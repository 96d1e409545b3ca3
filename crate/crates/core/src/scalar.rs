//! Scalar abstraction for model arithmetic.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type a [`NeuralModel`](crate::NeuralModel) evaluates in.
///
/// Forward evaluation, interval bounds and the counterexample search all run
/// in the same scalar type with the same summation order, so a model's
/// decision and the oracle's view of that decision cannot drift apart.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Logits with an absolute value below this margin are treated as
    /// ambiguous and are never explained.
    fn ambiguity_margin() -> Self;

    /// Lossy conversion used when loading portable documents.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::nan)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    #[inline]
    fn ambiguity_margin() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    // f32 carries ~7 significant digits; 1e-9 would sit below rounding noise.
    #[inline]
    fn ambiguity_margin() -> Self {
        1e-5
    }
}

#[inline]
pub(crate) fn relu<T: Scalar>(v: T) -> T {
    if v > T::zero() {
        v
    } else {
        T::zero()
    }
}
