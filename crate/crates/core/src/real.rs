use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};
use serde::Serialize;

/// Floating-point scalar the geometry kernel is generic over: `f32` or `f64`.
///
/// Tolerances throughout the crate are written as `f64` literals and converted
/// with [`Real::lit`]; they are calibrated for `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Serialize + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Absolute regularity threshold for O(1)-scaled geometry.
pub const EPS_REG: f64 = 1e-9;

/// Central finite-difference step used by every numerical oracle.
pub const FD_STEP: f64 = 1e-4;

pub(crate) fn eps_reg<T: Real>() -> T {
    T::lit(EPS_REG)
}

/// Maximum of `|x|` over an iterator, zero when empty; NaN entries are skipped.
pub(crate) fn max_abs<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    values
        .into_iter()
        .filter(|v| !v.is_nan())
        .fold(T::zero(), |m, v| m.max(v.abs()))
}
