/// Voxel lattice shared by label volumes and binary masks.
///
/// Linear indices run x fastest, then y, then z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub dims: [usize; 3],
    /// Millimetres per voxel along each axis.
    pub spacing: [f64; 3],
}

impl Grid {
    pub fn new(dims: [usize; 3], spacing: [f64; 3]) -> Self {
        Grid { dims, spacing }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    #[inline]
    pub fn coords(&self, i: usize) -> [usize; 3] {
        let nx = self.dims[0];
        let ny = self.dims[1];
        [i % nx, (i / nx) % ny, i / (nx * ny)]
    }

    #[inline]
    pub fn on_border(&self, i: usize) -> bool {
        let c = self.coords(i);
        (0..3).any(|a| c[a] == 0 || c[a] + 1 == self.dims[a])
    }

    /// Index of `c + offset`, or `None` when that lands outside the lattice.
    #[inline]
    pub fn offset(&self, c: [usize; 3], d: [isize; 3]) -> Option<usize> {
        let mut out = [0usize; 3];
        for a in 0..3 {
            let v = c[a] as isize + d[a];
            if v < 0 || v >= self.dims[a] as isize {
                return None;
            }
            out[a] = v as usize;
        }
        Some(self.index(out[0], out[1], out[2]))
    }

    pub(crate) fn validate(&self) -> Result<(), String> {
        if self.dims.contains(&0) {
            return Err(format!("dimensions must be positive, got {:?}", self.dims));
        }
        if self.spacing.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(format!(
                "spacing must be finite and positive, got {:?}",
                self.spacing
            ));
        }
        Ok(())
    }
}
