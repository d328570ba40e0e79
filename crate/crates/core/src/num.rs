//! Scalar abstraction: the engine is generic over any IEEE-style float.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the whole engine is parameterized over.
///
/// `f64` is the supported precision for every documented tolerance; `f32`
/// satisfies the bounds but cannot meet the tighter convergence targets.
pub trait Real: Float + FromPrimitive + Sum<Self> + Debug + Display + 'static {
    /// Converts a literal constant into the scalar type.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("constant must be representable in the scalar type")
    }

    /// Lossy view for diagnostics and reports.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Sum<Self> + Debug + Display + 'static {}
