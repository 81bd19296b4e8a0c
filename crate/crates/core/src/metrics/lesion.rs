use std::collections::BTreeSet;

use super::{check_same_grid, dice, hd95, EdgeCasePolicy, DEFAULT_HD_PENALTY_MM};
use crate::error::Result;
use crate::scalar::Real;
use crate::volume::BinaryMask;
use crate::voxelops::{dilate, label_components, Connectivity};

/// Lesion matching parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LesionMatchConfig<T> {
    /// FACE6 dilation applied to the ground truth before grouping lesions.
    pub dilation_iterations: usize,
    /// Ground-truth lesions smaller than this many voxels are ignored.
    pub min_lesion_size: usize,
    pub unmatched_dice: T,
    pub unmatched_hd: T,
}

impl<T: Real> Default for LesionMatchConfig<T> {
    fn default() -> Self {
        LesionMatchConfig {
            dilation_iterations: 3,
            min_lesion_size: 0,
            unmatched_dice: T::zero(),
            unmatched_hd: T::from_count(DEFAULT_HD_PENALTY_MM),
        }
    }
}

/// Per-lesion scores behind a lesion-wise result.
#[derive(Debug, Clone, PartialEq)]
pub struct LesionScores<T> {
    /// One entry per ground-truth lesion, then one per false-positive
    /// prediction component.
    pub entries: Vec<(T, T)>,
    pub lw_dice: T,
    pub lw_hd95: T,
}

/// Lesion-wise Dice and HD95.
///
/// Ground-truth lesions are the FULL26 components of the dilated ground
/// truth, restricted back to the original voxels. A prediction component is
/// assigned to every lesion whose dilated extent it touches. Each lesion is
/// scored against the union of its assigned components; unmatched lesions
/// and unassigned prediction components score the configured penalties.
/// Prediction components that touch only lesions dropped by
/// `min_lesion_size` are ignored.
pub fn lesion_wise<T: Real>(
    gt: &BinaryMask,
    pred: &BinaryMask,
    spacing: [T; 3],
    config: &LesionMatchConfig<T>,
    policy: &EdgeCasePolicy<T>,
) -> Result<LesionScores<T>> {
    check_same_grid(gt, pred)?;
    let grid = *gt.grid();

    let extents = label_components(
        &dilate(gt, Connectivity::Face6, config.dilation_iterations),
        Connectivity::Full26,
    );
    let pred_lab = label_components(pred, Connectivity::Full26);

    let mut assigned: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); pred_lab.count()];
    for (&e, &p) in extents.ids().iter().zip(pred_lab.ids()) {
        if e != 0 && p != 0 {
            assigned[p as usize - 1].insert(e);
        }
    }

    let ext_members = extents.members();
    let mut entries = Vec::new();
    for (k, members) in ext_members.iter().enumerate() {
        let id = k as u32 + 1;
        let lesion = BinaryMask::from_vec(grid, {
            let mut d = vec![false; grid.len()];
            for &i in members {
                d[i] = gt.get(i);
            }
            d
        });
        if lesion.count() < config.min_lesion_size {
            continue;
        }
        let matched = pred_lab.select(|p| assigned[p as usize - 1].contains(&id));
        if matched.any() {
            entries.push((
                dice(&lesion, &matched, policy)?,
                hd95(&lesion, &matched, spacing, policy)?,
            ));
        } else {
            entries.push((config.unmatched_dice, config.unmatched_hd));
        }
    }

    // components touching only ignored lesions are neither matches nor
    // false positives
    let false_positives = assigned.iter().filter(|a| a.is_empty()).count();
    entries.extend(std::iter::repeat_n(
        (config.unmatched_dice, config.unmatched_hd),
        false_positives,
    ));

    let (lw_dice, lw_hd95) = if entries.is_empty() {
        (policy.both_empty_dice, policy.both_empty_hd)
    } else {
        let n = T::from_count(entries.len());
        let (sd, sh) = entries
            .iter()
            .fold((T::zero(), T::zero()), |(a, b), &(d, h)| (a + d, b + h));
        (sd / n, sh / n)
    };
    Ok(LesionScores {
        entries,
        lw_dice,
        lw_hd95,
    })
}
