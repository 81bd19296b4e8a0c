use super::Connectivity;
use crate::volume::{BinaryMask, Grid};

/// Partition of a mask's foreground into connected components.
///
/// Components are numbered `1..=n` by decreasing size; equal sizes are
/// ordered by their smallest linear voxel index. Background is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentLabeling {
    grid: Grid,
    ids: Vec<u32>,
    sizes: Vec<usize>,
    connectivity: Connectivity,
}

impl ComponentLabeling {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    /// Sizes of components `1..=n`, non-increasing.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn connectivity(&self) -> Connectivity {
        self.connectivity
    }

    pub fn component_mask(&self, id: u32) -> BinaryMask {
        self.select(|c| c == id)
    }

    /// Union of the components for which `keep(id)` holds.
    pub fn select(&self, keep: impl Fn(u32) -> bool) -> BinaryMask {
        BinaryMask::from_vec(
            self.grid,
            self.ids.iter().map(|&c| c != 0 && keep(c)).collect(),
        )
    }

    /// Foreground voxel indices grouped by component, index `id - 1`.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (i, &c) in self.ids.iter().enumerate() {
            if c != 0 {
                out[c as usize - 1].push(i);
            }
        }
        out
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        // keep the earlier-scanned root so roots stay at minimum indices
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Labels the connected components of `mask`.
pub fn label_components(mask: &BinaryMask, conn: Connectivity) -> ComponentLabeling {
    let grid = *mask.grid();
    let n = grid.len();
    assert!(
        n < u32::MAX as usize,
        "volume too large for 32-bit component ids"
    );
    let data = mask.as_slice();

    // Provisional label per foreground voxel: its own index; unions merge
    // with already-visited neighbours only.
    let backward: Vec<[isize; 3]> = conn
        .offsets()
        .iter()
        .copied()
        .filter(|d| d[2] < 0 || (d[2] == 0 && (d[1] < 0 || (d[1] == 0 && d[0] < 0))))
        .collect();

    let mut parent: Vec<u32> = (0..n as u32).collect();
    for i in 0..n {
        if !data[i] {
            continue;
        }
        let c = grid.coords(i);
        for d in &backward {
            if let Some(j) = grid.offset(c, *d) {
                if data[j] {
                    union(&mut parent, i as u32, j as u32);
                }
            }
        }
    }

    // Roots are minimum indices of their components.
    let mut size_of_root = vec![0usize; n];
    let mut roots = Vec::new();
    for i in 0..n {
        if data[i] {
            let r = find(&mut parent, i as u32) as usize;
            parent[i] = r as u32;
            if size_of_root[r] == 0 {
                roots.push(r);
            }
            size_of_root[r] += 1;
        }
    }
    roots.sort_by(|&a, &b| size_of_root[b].cmp(&size_of_root[a]).then(a.cmp(&b)));

    let mut id_of_root = vec![0u32; n];
    for (k, &r) in roots.iter().enumerate() {
        id_of_root[r] = k as u32 + 1;
    }
    let ids = (0..n)
        .map(|i| {
            if data[i] {
                id_of_root[parent[i] as usize]
            } else {
                0
            }
        })
        .collect();
    let sizes = roots.iter().map(|&r| size_of_root[r]).collect();

    ComponentLabeling {
        grid,
        ids,
        sizes,
        connectivity: conn,
    }
}

/// Union of the `k` largest components.
pub fn top_k_mask(lab: &ComponentLabeling, k: usize) -> BinaryMask {
    lab.select(|c| (c as usize) <= k)
}

/// Union of components with fewer than `threshold` voxels.
pub fn small_components_mask(lab: &ComponentLabeling, threshold: usize) -> BinaryMask {
    lab.select(|c| lab.sizes[c as usize - 1] < threshold)
}
