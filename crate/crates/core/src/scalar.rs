//! Real scalar abstraction for the numerical kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real floating-point scalar the solver is generic over (f32 or f64).
///
/// Double precision is the intended default: the trace and Hermiticity
/// tolerances used throughout (1e-10 .. 1e-12) are out of reach in single
/// precision at realistic network sizes.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Send + Sync + Debug + Display + Default + 'static
{
    /// Lossy conversion from an f64 literal (tableau coefficients, defaults).
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 literal converts to any Scalar")
    }

    /// Lossy conversion from a usize (dimensions entering formulas).
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize converts to any Scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
