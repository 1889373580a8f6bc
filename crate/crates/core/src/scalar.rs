//! Floating-point abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar used for probabilities and information quantities.
///
/// Implemented for `f32` and `f64`. Tolerances are written against `f64`
/// and widened to the working precision through [`Scalar::tolerance`].
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into this scalar.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    /// Widens a nominal double-precision tolerance so that it stays above
    /// the round-off floor of this type.
    fn tolerance(nominal: f64) -> Self {
        Self::lit(nominal).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Lossy view as `f64`, for sampling and reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Tolerance ladder. Exact algebraic identities use the tightest rung,
/// reformulations the middle one, normalization checks the loosest.
pub mod tol {
    /// Algebraic identities that should hold up to round-off.
    pub const IDENTITY: f64 = 1e-12;
    /// Two formulations of the same quantity.
    pub const REFORMULATION: f64 = 1e-10;
    /// Probability vectors summing to one, and log-space bound checks.
    pub const NORMALIZATION: f64 = 1e-9;
}
