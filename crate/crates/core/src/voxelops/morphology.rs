use std::collections::VecDeque;

use rayon::prelude::*;

use super::Connectivity;
use crate::volume::{BinaryMask, Grid};

/// One pass along `axis`: each voxel combines itself with its two axis
/// neighbours. Out-of-volume neighbours count as background, so with
/// `all = true` (erosion) border voxels are cleared.
fn sweep(grid: &Grid, src: &[bool], axis: usize, all: bool) -> Vec<bool> {
    let [nx, ny, _] = grid.dims;
    let n_axis = grid.dims[axis];
    let stride = [1, nx, nx * ny][axis];
    let plane = nx * ny;
    let mut out = vec![false; src.len()];
    out.par_chunks_mut(plane)
        .enumerate()
        .for_each(|(z, chunk)| {
            let base = z * plane;
            for (k, o) in chunk.iter_mut().enumerate() {
                let i = base + k;
                let pos = [k % nx, k / nx, z][axis];
                let lo = (pos > 0).then(|| src[i - stride]);
                let hi = (pos + 1 < n_axis).then(|| src[i + stride]);
                let (lo, hi) = (lo.unwrap_or(false), hi.unwrap_or(false));
                *o = if all {
                    src[i] && lo && hi
                } else {
                    src[i] || lo || hi
                };
            }
        });
    out
}

fn step(grid: &Grid, src: Vec<bool>, conn: Connectivity, all: bool) -> Vec<bool> {
    match conn {
        // the 3x3x3 cube is separable into three axis segments
        Connectivity::Full26 => {
            let a = sweep(grid, &src, 0, all);
            let b = sweep(grid, &a, 1, all);
            sweep(grid, &b, 2, all)
        }
        // the 6-neighbourhood cross is the union of three axis segments
        Connectivity::Face6 => {
            let a = sweep(grid, &src, 0, all);
            let b = sweep(grid, &src, 1, all);
            let c = sweep(grid, &src, 2, all);
            a.iter()
                .zip(&b)
                .zip(&c)
                .map(|((&a, &b), &c)| if all { a && b && c } else { a || b || c })
                .collect()
        }
    }
}

fn iterate(mask: &BinaryMask, conn: Connectivity, iterations: usize, all: bool) -> BinaryMask {
    let grid = *mask.grid();
    let mut data = mask.as_slice().to_vec();
    for _ in 0..iterations {
        data = step(&grid, data, conn, all);
    }
    BinaryMask::from_vec(grid, data)
}

/// Iterated union with the connectivity neighbourhood, clipped at the border.
pub fn dilate(mask: &BinaryMask, conn: Connectivity, iterations: usize) -> BinaryMask {
    iterate(mask, conn, iterations, false)
}

/// Iterated intersection over the connectivity neighbourhood; voxels
/// outside the volume are background.
pub fn erode(mask: &BinaryMask, conn: Connectivity, iterations: usize) -> BinaryMask {
    iterate(mask, conn, iterations, true)
}

/// Dilation followed by erosion with the same parameters.
///
/// Runs on a copy padded by `iterations` background voxels per side, so the
/// result equals closing on an unbounded lattice clipped to the volume.
/// Closing is therefore extensive and idempotent even at the border.
pub fn close(mask: &BinaryMask, conn: Connectivity, iterations: usize) -> BinaryMask {
    if iterations == 0 {
        return mask.clone();
    }
    let grid = *mask.grid();
    let pad = iterations;
    let padded_dims = grid.dims.map(|d| d + 2 * pad);
    let padded = Grid::new(padded_dims, grid.spacing);
    let mut data = vec![false; padded.len()];
    for i in mask.ones() {
        let c = grid.coords(i);
        data[padded.index(c[0] + pad, c[1] + pad, c[2] + pad)] = true;
    }
    let closed = erode(
        &dilate(&BinaryMask::from_vec(padded, data), conn, iterations),
        conn,
        iterations,
    );
    BinaryMask::from_fn(grid, |c| closed.at(c[0] + pad, c[1] + pad, c[2] + pad))
}

/// Adds to `mask` every background voxel that cannot reach the volume
/// border through background under `bg_conn`.
pub fn fill_holes_mask(mask: &BinaryMask, bg_conn: Connectivity) -> BinaryMask {
    let grid = *mask.grid();
    let data = mask.as_slice();
    let mut outside = vec![false; data.len()];
    let mut queue = VecDeque::new();
    for i in 0..data.len() {
        if !data[i] && grid.on_border(i) {
            outside[i] = true;
            queue.push_back(i);
        }
    }
    let offsets = bg_conn.offsets();
    while let Some(i) = queue.pop_front() {
        let c = grid.coords(i);
        for d in offsets {
            if let Some(j) = grid.offset(c, *d) {
                if !data[j] && !outside[j] {
                    outside[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    BinaryMask::from_vec(grid, outside.into_iter().map(|o| !o).collect())
}
