//! Numeric traits the metric and ranking code is generic over.
//!
//! Overlap scores only need field arithmetic, so they work for floats and
//! for exact rationals alike. Distances need square roots and therefore a
//! real floating-point type.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits as nt;

/// A field element that can be built from a voxel count.
pub trait Scalar: nt::Num + Copy + PartialOrd + Debug + Send + Sync + 'static {
    fn from_count(n: usize) -> Self;
}

/// A floating point scalar.
pub trait Real: Scalar + nt::Float + nt::FromPrimitive + nt::ToPrimitive {
    /// Lossy conversion used for reporting.
    fn to_f64_lossy(self) -> f64 {
        nt::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn from_f64_lossy(v: f64) -> Self {
        <Self as nt::FromPrimitive>::from_f64(v).unwrap_or_else(Self::nan)
    }
}

impl Scalar for f32 {
    fn from_count(n: usize) -> Self {
        n as f32
    }
}

impl Scalar for f64 {
    fn from_count(n: usize) -> Self {
        n as f64
    }
}

impl Real for f32 {}
impl Real for f64 {}

impl Scalar for Ratio<i64> {
    fn from_count(n: usize) -> Self {
        Ratio::from_integer(i64::try_from(n).expect("voxel count exceeds i64"))
    }
}

impl Scalar for Ratio<i128> {
    fn from_count(n: usize) -> Self {
        Ratio::from_integer(n as i128)
    }
}
