//! Scalar abstraction for the spectral calculus.
//!
//! Everything that is pure spectral algebra (eigenvalues, multipliers,
//! Sobolev norms, the characterization test) is written against [`Scalar`]
//! so it runs in `f32` or `f64`. The Monte Carlo side is `f64` only.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real field the spectral routines are generic over.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; used for geometry and quadrature constants.
    #[inline]
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_f64() {
        assert_eq!(<f64 as Scalar>::of(0.25).as_f64(), 0.25);
        assert_eq!(<f32 as Scalar>::of(0.25).as_f64(), 0.25);
    }
}
