//! Real scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the library is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal (tolerances, constants) into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in target float type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`].
pub type Complex<R> = num_complex::Complex<R>;

/// `z / |z|`, with the positive real axis substituted at `z = 0`.
pub fn unit_phase<R: Real>(z: Complex<R>, tol: R) -> Complex<R> {
    let n = z.norm();
    if n <= tol {
        Complex::new(R::one(), R::zero())
    } else {
        z / n
    }
}
