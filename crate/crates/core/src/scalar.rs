//! Scalar abstraction shared by the symbolic and numeric layers.

use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// Everything below the analysis layer is written against this trait. The
/// tolerances quoted throughout the crate are double-precision values; `tol`
/// clamps them to a few ulps of the active type so that `f32` instantiations
/// stay meaningful.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
    /// Literal conversion from an `f64` constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    /// A tolerance of `x`, but never tighter than 64 machine epsilons.
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        let v = Self::lit(x);
        if v > floor {
            v
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `|x - y| <= tol * max(1, |x|, |y|)`.
pub(crate) fn close<T: Real>(x: T, y: T, tol: T) -> bool {
    let scale = T::one().max(x.abs()).max(y.abs());
    (x - y).abs() <= tol * scale
}
