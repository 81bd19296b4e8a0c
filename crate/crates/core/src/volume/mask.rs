use super::Grid;

/// Dense boolean occupancy on a voxel lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMask {
    grid: Grid,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn empty(grid: Grid) -> Self {
        BinaryMask {
            data: vec![false; grid.len()],
            grid,
        }
    }

    pub fn from_vec(grid: Grid, data: Vec<bool>) -> Self {
        assert_eq!(grid.len(), data.len(), "mask length does not match grid");
        BinaryMask { grid, data }
    }

    /// Builds a mask from a predicate on voxel coordinates.
    pub fn from_fn(grid: Grid, mut f: impl FnMut([usize; 3]) -> bool) -> Self {
        let data = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        BinaryMask { grid, data }
    }

    pub fn from_coords(grid: Grid, coords: &[[usize; 3]]) -> Self {
        let mut m = Self::empty(grid);
        for c in coords {
            let i = grid.index(c[0], c[1], c[2]);
            m.data[i] = true;
        }
        m
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

    pub fn as_slice(&self) -> &[bool] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<bool> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.data[i]
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize, z: usize) -> bool {
        self.data[self.grid.index(x, y, z)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        self.data[i] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn any(&self) -> bool {
        self.data.iter().any(|&b| b)
    }

    /// Linear indices of set voxels, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    fn zip_with(&self, other: &BinaryMask, f: impl Fn(bool, bool) -> bool) -> BinaryMask {
        assert_eq!(self.dims(), other.dims(), "mask dimensions differ");
        BinaryMask {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn and(&self, other: &BinaryMask) -> BinaryMask {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn or(&self, other: &BinaryMask) -> BinaryMask {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn and_not(&self, other: &BinaryMask) -> BinaryMask {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn not(&self) -> BinaryMask {
        BinaryMask {
            grid: self.grid,
            data: self.data.iter().map(|&b| !b).collect(),
        }
    }

    /// True when every set voxel of `self` is also set in `other`.
    pub fn is_subset(&self, other: &BinaryMask) -> bool {
        self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }

    pub fn intersects(&self, other: &BinaryMask) -> bool {
        self.data.iter().zip(&other.data).any(|(&a, &b)| a && b)
    }
}
