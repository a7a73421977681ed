//! Scalar abstraction for the numerical core.
//!
//! Everything upstream of the experiment harness (kernels, quadrature, the
//! eigensolver, the concentration bounds) is written against [`Real`] so the
//! same code runs in `f32` or `f64`. The harness and the CLI pin `f64`; see
//! the type aliases at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating-point scalar used by the numerical core.
///
/// The supertraits cover what the algorithms actually need: IEEE arithmetic
/// with `sqrt`/`ln`/`hypot` ([`Float`]), conversion from literals and counts
/// ([`FromPrimitive`]), compound assignment, and summation. Implemented for
/// `f32` and `f64`; the provided conversion helpers panic only for values no
/// IEEE type can represent, which cannot happen for the inputs this crate
/// accepts.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant (tolerances, catalog parameters) into `Self`.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant must be representable in the scalar type")
    }

    /// Converts a count (matrix dimension, grid size) into `Self`.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count must be representable in the scalar type")
    }

    /// Widens to `f64` for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar must widen to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
