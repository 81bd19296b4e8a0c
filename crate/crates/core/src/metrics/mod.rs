//! Overlap and surface-distance metrics, global and lesion-wise.

mod case;
mod distance;
mod lesion;

pub use case::{evaluate_case, EvalConfig, Metric, MetricRecord};
pub use distance::{directed_surface_distances, hd95, percentile, surface_mask, surface_voxels};
pub use lesion::{lesion_wise, LesionMatchConfig, LesionScores};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::volume::BinaryMask;

/// Scores used when one or both masks are empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCasePolicy<T> {
    pub both_empty_dice: T,
    /// Millimetres.
    pub both_empty_hd: T,
    pub one_empty_dice: T,
    /// Millimetres; must be positive.
    pub one_empty_hd: T,
}

/// Distance assigned when a structure is missing from one mask.
pub const DEFAULT_HD_PENALTY_MM: usize = 374;

impl<T: Scalar> Default for EdgeCasePolicy<T> {
    fn default() -> Self {
        EdgeCasePolicy {
            both_empty_dice: T::one(),
            both_empty_hd: T::zero(),
            one_empty_dice: T::zero(),
            one_empty_hd: T::from_count(DEFAULT_HD_PENALTY_MM),
        }
    }
}

impl<T: Scalar> EdgeCasePolicy<T> {
    pub fn with_penalty(penalty: T) -> Result<Self> {
        if !(penalty > T::zero()) {
            return Err(Error::Data(format!(
                "HD penalty must be positive, got {penalty:?}"
            )));
        }
        Ok(EdgeCasePolicy {
            one_empty_hd: penalty,
            ..Self::default()
        })
    }
}

pub(crate) fn check_same_grid(a: &BinaryMask, b: &BinaryMask) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimsMismatch(a.dims(), b.dims()));
    }
    if a.spacing() != b.spacing() {
        return Err(Error::SpacingMismatch(a.spacing(), b.spacing()));
    }
    Ok(())
}

/// Dice coefficient `2|A∩B| / (|A|+|B|)`.
///
/// Exact when `T` is a rational type.
pub fn dice<T: Scalar>(
    gt: &BinaryMask,
    pred: &BinaryMask,
    policy: &EdgeCasePolicy<T>,
) -> Result<T> {
    if gt.dims() != pred.dims() {
        return Err(Error::DimsMismatch(gt.dims(), pred.dims()));
    }
    let (mut a, mut b, mut both) = (0usize, 0usize, 0usize);
    for (&g, &p) in gt.as_slice().iter().zip(pred.as_slice()) {
        a += g as usize;
        b += p as usize;
        both += (g && p) as usize;
    }
    Ok(match (a, b) {
        (0, 0) => policy.both_empty_dice,
        (0, _) | (_, 0) => policy.one_empty_dice,
        _ => T::from_count(2 * both) / T::from_count(a + b),
    })
}
