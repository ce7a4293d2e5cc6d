//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar usable by the solver and the certificate code.
///
/// Implemented for `f32` and `f64`. The tolerance constants are calibrated for
/// each precision; the `f64` values are the ones the test-suite pins.
pub trait Scalar: RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {
    /// Pairwise inner-product slack accepted for orthonormal bases.
    const ORTH_TOL: Self;
    /// Principal cosines at or above `1 - INTERSECT_TOL` count as a shared direction.
    const INTERSECT_TOL: Self;
    /// Relative residual tolerance for membership in `{x : Mx = p}`.
    const FEAS_TOL: Self;
    /// Absolute tolerance for coordinate equality tests.
    const EQ_TOL: Self;

    fn machine_epsilon() -> Self;

    /// Lossy conversion from an `f64` literal.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const ORTH_TOL: f64 = 1e-10;
    const INTERSECT_TOL: f64 = 1e-9;
    const FEAS_TOL: f64 = 1e-8;
    const EQ_TOL: f64 = 1e-12;

    fn machine_epsilon() -> f64 {
        f64::EPSILON
    }
}

impl Scalar for f32 {
    const ORTH_TOL: f32 = 1e-5;
    const INTERSECT_TOL: f32 = 1e-4;
    const FEAS_TOL: f32 = 1e-4;
    const EQ_TOL: f32 = 1e-6;

    fn machine_epsilon() -> f32 {
        f32::EPSILON
    }
}
