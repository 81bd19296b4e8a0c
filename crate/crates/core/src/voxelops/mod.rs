//! Lattice primitives on binary masks: connected components, component
//! selection, hole filling, and morphology.

mod components;
mod morphology;

pub use components::{label_components, small_components_mask, top_k_mask, ComponentLabeling};
pub use morphology::{close, dilate, erode, fill_holes_mask};

use serde::{Deserialize, Serialize};

/// Voxel adjacency rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Connectivity {
    /// Voxels sharing a face.
    Face6,
    /// Voxels sharing a face, an edge, or a corner.
    #[default]
    Full26,
}

impl TryFrom<u8> for Connectivity {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            6 => Ok(Connectivity::Face6),
            26 => Ok(Connectivity::Full26),
            other => Err(format!("connectivity must be 6 or 26, got {other}")),
        }
    }
}

impl From<Connectivity> for u8 {
    fn from(c: Connectivity) -> u8 {
        match c {
            Connectivity::Face6 => 6,
            Connectivity::Full26 => 26,
        }
    }
}

impl Connectivity {
    /// Neighbour offsets, excluding the voxel itself.
    pub fn offsets(self) -> &'static [[isize; 3]] {
        match self {
            Connectivity::Face6 => &FACE6,
            Connectivity::Full26 => &FULL26,
        }
    }
}

const FACE6: [[isize; 3]; 6] = [
    [-1, 0, 0],
    [1, 0, 0],
    [0, -1, 0],
    [0, 1, 0],
    [0, 0, -1],
    [0, 0, 1],
];

const FULL26: [[isize; 3]; 26] = {
    let mut out = [[0isize; 3]; 26];
    let mut k = 0;
    let mut dz = -1;
    while dz <= 1 {
        let mut dy = -1;
        while dy <= 1 {
            let mut dx = -1;
            while dx <= 1 {
                if !(dx == 0 && dy == 0 && dz == 0) {
                    out[k] = [dx, dy, dz];
                    k += 1;
                }
                dx += 1;
            }
            dy += 1;
        }
        dz += 1;
    }
    out
};
