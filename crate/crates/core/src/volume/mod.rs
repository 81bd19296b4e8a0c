//! Label volumes, binary masks, and label schemes.

mod grid;
mod mask;
pub mod nifti;
mod scheme;

use std::collections::BTreeSet;

pub use grid::Grid;
pub use mask::BinaryMask;
pub use nifti::{load_volume, save_volume, NiftiMeta};
pub use scheme::LabelScheme;

use crate::error::{Error, Result};

/// A label id. Background is 0.
pub type Label = u8;

/// Dense 3D grid of integer labels with physical voxel spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelVolume {
    grid: Grid,
    labels: Vec<Label>,
    case_id: String,
    meta: NiftiMeta,
}

impl LabelVolume {
    pub fn new(
        dims: [usize; 3],
        spacing: [f64; 3],
        labels: Vec<Label>,
        case_id: impl Into<String>,
    ) -> Result<Self> {
        let grid = Grid::new(dims, spacing);
        grid.validate().map_err(Error::InvalidVolume)?;
        if labels.len() != grid.len() {
            return Err(Error::InvalidVolume(format!(
                "{} labels for dims {:?} ({} voxels)",
                labels.len(),
                dims,
                grid.len()
            )));
        }
        Ok(LabelVolume {
            grid,
            labels,
            case_id: case_id.into(),
            meta: NiftiMeta::default(),
        })
    }

    /// All-background volume.
    pub fn zeros(dims: [usize; 3], spacing: [f64; 3], case_id: impl Into<String>) -> Result<Self> {
        let n = dims.iter().product();
        Self::new(dims, spacing, vec![0; n], case_id)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dims(&self) -> [usize; 3] {
        self.grid.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.grid.spacing
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn case_id(&self) -> &str {
        &self.case_id
    }

    pub fn meta(&self) -> &NiftiMeta {
        &self.meta
    }

    pub fn with_case_id(mut self, case_id: impl Into<String>) -> Self {
        self.case_id = case_id.into();
        self
    }

    pub fn with_meta(mut self, meta: NiftiMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> Label {
        self.labels[self.grid.index(x, y, z)]
    }

    /// Replaces the label array, keeping grid, case id and metadata.
    pub(crate) fn with_labels(&self, labels: Vec<Label>) -> Self {
        debug_assert_eq!(labels.len(), self.labels.len());
        LabelVolume {
            grid: self.grid,
            labels,
            case_id: self.case_id.clone(),
            meta: self.meta.clone(),
        }
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    pub fn distinct_labels(&self) -> BTreeSet<Label> {
        let mut seen = [false; 256];
        for &l in &self.labels {
            seen[l as usize] = true;
        }
        (0..=255u8).filter(|&l| seen[l as usize]).collect()
    }

    /// Mask of voxels whose label is in `labels`, without scheme checks.
    pub fn mask_of(&self, labels: &[Label]) -> BinaryMask {
        let mut member = [false; 256];
        for &l in labels {
            member[l as usize] = true;
        }
        BinaryMask::from_vec(
            self.grid,
            self.labels.iter().map(|&l| member[l as usize]).collect(),
        )
    }

    /// Mask of all nonzero voxels.
    pub fn foreground(&self) -> BinaryMask {
        BinaryMask::from_vec(self.grid, self.labels.iter().map(|&l| l != 0).collect())
    }
}

/// Binary mask of voxels whose label is in `labels`.
///
/// Every requested label must belong to the scheme's label universe.
pub fn region_mask<'a>(
    vol: &LabelVolume,
    labels: impl IntoIterator<Item = &'a Label>,
    scheme: &LabelScheme,
) -> Result<BinaryMask> {
    let labels: Vec<Label> = labels.into_iter().copied().collect();
    let universe = scheme.universe();
    if let Some(&bad) = labels.iter().find(|l| !universe.contains(l)) {
        return Err(Error::UnknownLabel(bad));
    }
    Ok(vol.mask_of(&labels))
}

/// Copy of `vol` with `label` written wherever `mask` is set.
pub fn set_region(
    vol: &LabelVolume,
    mask: &BinaryMask,
    label: Label,
    scheme: &LabelScheme,
) -> Result<LabelVolume> {
    if label != 0 && !scheme.universe().contains(&label) {
        return Err(Error::UnknownLabel(label));
    }
    write_region(vol, mask, label)
}

pub(crate) fn write_region(
    vol: &LabelVolume,
    mask: &BinaryMask,
    label: Label,
) -> Result<LabelVolume> {
    if mask.dims() != vol.dims() {
        return Err(Error::DimsMismatch(vol.dims(), mask.dims()));
    }
    let labels = vol
        .labels
        .iter()
        .zip(mask.as_slice())
        .map(|(&l, &m)| if m { label } else { l })
        .collect();
    Ok(vol.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vol(dims: [usize; 3], labels: Vec<u8>) -> LabelVolume {
        LabelVolume::new(dims, [1.0; 3], labels, "t").unwrap()
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(LabelVolume::new([2, 2, 2], [1.0; 3], vec![0; 7], "x").is_err());
        assert!(LabelVolume::new([0, 2, 2], [1.0; 3], vec![], "x").is_err());
        assert!(LabelVolume::new([1, 1, 1], [1.0, 0.0, 1.0], vec![0], "x").is_err());
        assert!(LabelVolume::new([1, 1, 1], [1.0, f64::NAN, 1.0], vec![0], "x").is_err());
    }

    #[test]
    fn region_mask_examples() {
        let scheme = LabelScheme::default();
        let all4 = vol([2, 2, 2], vec![4; 8]);
        assert_eq!(region_mask(&all4, &[4], &scheme).unwrap().count(), 8);
        assert_eq!(region_mask(&all4, &[], &scheme).unwrap().count(), 0);

        let v = vol([5, 1, 1], vec![1, 2, 3, 4, 0]);
        let wt = scheme.class("WT").unwrap();
        let m = region_mask(&v, wt, &scheme).unwrap();
        assert_eq!(m.as_slice(), &[true, true, true, false, false]);

        assert!(matches!(
            region_mask(&v, &[7], &scheme),
            Err(Error::UnknownLabel(7))
        ));
    }

    #[test]
    fn set_region_examples() {
        let scheme = LabelScheme::default();
        let v = vol([2, 2, 2], vec![4; 8]);
        let none = BinaryMask::empty(*v.grid());
        assert_eq!(set_region(&v, &none, 2, &scheme).unwrap(), v);

        let all = none.not();
        let z = set_region(&v, &all, 0, &scheme).unwrap();
        assert!(z.labels().iter().all(|&l| l == 0));

        let mut one = BinaryMask::empty(*v.grid());
        one.set(0, true);
        let out = set_region(&v, &one, 2, &scheme).unwrap();
        assert_eq!(out.get(0, 0, 0), 2);
        assert_eq!(out.count(4), 7);
        // input untouched
        assert_eq!(v.count(4), 8);

        let small = BinaryMask::empty(Grid::new([1, 1, 1], [1.0; 3]));
        assert!(matches!(
            set_region(&v, &small, 2, &scheme),
            Err(Error::DimsMismatch(..))
        ));
        assert!(set_region(&v, &one, 9, &scheme).is_err());
    }
}
