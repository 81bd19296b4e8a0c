use super::{Mode, Transform, TransformParams};
use crate::error::{Error, Result};
use crate::volume::{write_region, BinaryMask, Label, LabelVolume};
use crate::voxelops::{
    close, fill_holes_mask, label_components, small_components_mask, top_k_mask, Connectivity,
};

/// Runs `select` on each target mask (per label, or once on the union) and
/// writes `value` into the selected voxels.
fn per_target(
    vol: &LabelVolume,
    labels: &[Label],
    mode: Mode,
    value: Label,
    select: impl Fn(&BinaryMask) -> BinaryMask,
) -> Result<LabelVolume> {
    match mode {
        Mode::Joint => write_region(vol, &select(&vol.mask_of(labels)), value),
        Mode::Sequential => labels.iter().try_fold(vol.clone(), |cur, &l| {
            write_region(&cur, &select(&cur.mask_of(&[l])), value)
        }),
    }
}

pub(super) fn small_objects(
    vol: &LabelVolume,
    labels: &[Label],
    threshold: usize,
    replacement: Label,
    conn: Connectivity,
    mode: Mode,
) -> Result<LabelVolume> {
    per_target(vol, labels, mode, replacement, |m| {
        small_components_mask(&label_components(m, conn), threshold)
    })
}

pub(super) fn top_k(
    vol: &LabelVolume,
    labels: &[Label],
    k: usize,
    conn: Connectivity,
    mode: Mode,
) -> Result<LabelVolume> {
    per_target(vol, labels, mode, 0, |m| {
        m.and_not(&top_k_mask(&label_components(m, conn), k))
    })
}

pub(super) fn fill_holes(
    vol: &LabelVolume,
    labels: &[Label],
    fill_label: Label,
    bg_conn: Connectivity,
) -> Result<LabelVolume> {
    let region = vol.mask_of(labels);
    let holes = fill_holes_mask(&region, bg_conn).and_not(&region);
    let background = vol.mask_of(&[0]);
    write_region(vol, &holes.and(&background), fill_label)
}

pub(super) fn closing(
    vol: &LabelVolume,
    labels: &[Label],
    conn: Connectivity,
    iterations: usize,
) -> Result<LabelVolume> {
    labels.iter().try_fold(vol.clone(), |cur, &l| {
        let m = cur.mask_of(&[l]);
        let added = close(&m, conn, iterations)
            .and_not(&m)
            .and(&cur.mask_of(&[0]));
        write_region(&cur, &added, l)
    })
}

fn conn_or(p: &TransformParams, default: Connectivity) -> Connectivity {
    p.connectivity.unwrap_or(default)
}

/// Sets voxels of target-label components smaller than `threshold` to 0.
pub fn remove_small_objects(vol: &LabelVolume, p: &TransformParams) -> Result<LabelVolume> {
    const NAME: &str = "remove_small_objects";
    let labels = p.require_labels(NAME)?;
    let threshold = TransformParams::require(NAME, p.threshold, "threshold")?;
    small_objects(
        vol,
        labels,
        threshold,
        0,
        conn_or(p, Connectivity::Full26),
        p.mode.unwrap_or_default(),
    )
}

/// Relabels voxels of target-label components smaller than `threshold`.
pub fn replace_small_objects(vol: &LabelVolume, p: &TransformParams) -> Result<LabelVolume> {
    const NAME: &str = "replace_small_objects";
    let labels = p.require_labels(NAME)?;
    let threshold = TransformParams::require(NAME, p.threshold, "threshold")?;
    let replacement = TransformParams::require(NAME, p.replacement, "replacement")?;
    small_objects(
        vol,
        labels,
        threshold,
        replacement,
        conn_or(p, Connectivity::Full26),
        p.mode.unwrap_or_default(),
    )
}

/// Keeps only the `k` largest target-label components.
pub fn keep_top_k(vol: &LabelVolume, p: &TransformParams) -> Result<LabelVolume> {
    const NAME: &str = "keep_top_k";
    let labels = p.require_labels(NAME)?;
    let k = TransformParams::require(NAME, p.k, "k")?;
    if k == 0 {
        return Err(Error::params(NAME, "`k` must be at least 1"));
    }
    top_k(
        vol,
        labels,
        k,
        conn_or(p, Connectivity::Full26),
        p.mode.unwrap_or_default(),
    )
}

/// Fills background pockets enclosed by the union of `labels`.
///
/// Only voxels labelled 0 inside a hole change; enclosed voxels of other
/// classes keep their label. `connectivity` is the background connectivity
/// used to decide whether a pocket reaches the border.
pub fn fill_holes_with_label(vol: &LabelVolume, p: &TransformParams) -> Result<LabelVolume> {
    const NAME: &str = "fill_holes_with_label";
    let labels = p.require_labels(NAME)?;
    let fill = TransformParams::require(NAME, p.fill_label, "fill_label")?;
    fill_holes(vol, labels, fill, conn_or(p, Connectivity::Face6))
}

/// Per-label closing that only ever claims background voxels.
pub fn morphological_closing(vol: &LabelVolume, p: &TransformParams) -> Result<LabelVolume> {
    const NAME: &str = "morphological_closing";
    let labels = p.require_labels(NAME)?;
    let iterations = TransformParams::require(NAME, p.iterations, "iterations")?;
    if p.mode == Some(Mode::Joint) {
        return Err(Error::params(NAME, "joint mode is not supported"));
    }
    closing(vol, labels, conn_or(p, Connectivity::Full26), iterations)
}

/// Adapts one of the functions above into a [`Transform`].
pub(super) struct FnTransform {
    pub(super) params: TransformParams,
    pub(super) run: fn(&LabelVolume, &TransformParams) -> Result<LabelVolume>,
}

impl Transform for FnTransform {
    fn apply(&self, vol: &LabelVolume) -> Result<LabelVolume> {
        (self.run)(vol, &self.params)
    }
}
