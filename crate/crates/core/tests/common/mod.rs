//! Random inputs and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use maskforge::volume::BinaryMask;
use maskforge::{Grid, Label, LabelVolume};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dims(rng: &mut impl Rng, max: usize) -> [usize; 3] {
    [0; 3].map(|_| rng.gen_range(1..=max))
}

/// Independent Bernoulli voxels.
pub fn random_mask(rng: &mut impl Rng, dims: [usize; 3], p: f64) -> BinaryMask {
    let grid = Grid::new(dims, [1.0; 3]);
    BinaryMask::from_vec(grid, (0..grid.len()).map(|_| rng.gen_bool(p)).collect())
}

/// A mask of a few random boxes, which yields clustered surfaces.
pub fn random_blobby_mask(rng: &mut impl Rng, dims: [usize; 3]) -> BinaryMask {
    let grid = Grid::new(dims, [1.0; 3]);
    let mut m = BinaryMask::empty(grid);
    for _ in 0..rng.gen_range(0..=4) {
        let lo = dims.map(|d| rng.gen_range(0..d));
        let hi = [0, 1, 2].map(|a| rng.gen_range(lo[a]..dims[a]) + 1);
        for z in lo[2]..hi[2] {
            for y in lo[1]..hi[1] {
                for x in lo[0]..hi[0] {
                    m.set(grid.index(x, y, z), true);
                }
            }
        }
    }
    // sprinkle isolated voxels
    for _ in 0..rng.gen_range(0..4) {
        let i = rng.gen_range(0..grid.len());
        m.set(i, true);
    }
    m
}

fn paint_box(
    labels: &mut [Label],
    grid: &Grid,
    lo: [usize; 3],
    hi: [usize; 3],
    mut f: impl FnMut([usize; 3]) -> Option<Label>,
) {
    for z in lo[2]..hi[2] {
        for y in lo[1]..hi[1] {
            for x in lo[0]..hi[0] {
                if let Some(l) = f([x, y, z]) {
                    labels[grid.index(x, y, z)] = l;
                }
            }
        }
    }
}

/// A label volume with random solid boxes, hollow shells (which enclose
/// holes), and speckle. Labels are drawn from `palette`.
pub fn random_volume(rng: &mut impl Rng, max_dim: usize, palette: &[Label]) -> LabelVolume {
    let dims = [0; 3].map(|_| rng.gen_range(4..=max_dim));
    random_volume_in(rng, dims, palette)
}

pub fn random_volume_in(rng: &mut impl Rng, dims: [usize; 3], palette: &[Label]) -> LabelVolume {
    let grid = Grid::new(dims, [1.0; 3]);
    let mut labels = vec![0 as Label; grid.len()];
    for _ in 0..rng.gen_range(1..=6) {
        let label = palette[rng.gen_range(0..palette.len())];
        let size = dims.map(|d| rng.gen_range(1..=d.min(9)));
        let lo = [0, 1, 2].map(|a| rng.gen_range(0..=dims[a] - size[a]));
        let hi = [0, 1, 2].map(|a| lo[a] + size[a]);
        if rng.gen_bool(0.4) && size.iter().all(|&s| s >= 3) {
            // shell with a zero interior, sometimes holding another label
            let inner = palette[rng.gen_range(0..palette.len())];
            let p_inner = if rng.gen_bool(0.5) { 0.0 } else { 0.2 };
            paint_box(&mut labels, &grid, lo, hi, |c| {
                let on_shell = (0..3).any(|a| c[a] == lo[a] || c[a] + 1 == hi[a]);
                Some(if on_shell {
                    label
                } else if rng.gen_bool(p_inner) {
                    inner
                } else {
                    0
                })
            });
        } else {
            paint_box(&mut labels, &grid, lo, hi, |_| Some(label));
        }
    }
    for _ in 0..rng.gen_range(0..10) {
        let i = rng.gen_range(0..grid.len());
        labels[i] = if rng.gen_bool(0.3) {
            0
        } else {
            palette[rng.gen_range(0..palette.len())]
        };
    }
    LabelVolume::new(dims, [1.0; 3], labels, "random").unwrap()
}

/// Neighbour offsets by brute force: 6 face or 26 full.
pub fn neighbours(full: bool) -> Vec<[isize; 3]> {
    let mut out = Vec::new();
    for dz in -1..=1isize {
        for dy in -1..=1isize {
            for dx in -1..=1isize {
                let manhattan = dx.abs() + dy.abs() + dz.abs();
                if manhattan != 0 && (full || manhattan == 1) {
                    out.push([dx, dy, dz]);
                }
            }
        }
    }
    out
}

fn step(dims: [usize; 3], c: [usize; 3], d: [isize; 3]) -> Option<[usize; 3]> {
    let mut n = [0; 3];
    for a in 0..3 {
        let v = c[a] as isize + d[a];
        if v < 0 || v >= dims[a] as isize {
            return None;
        }
        n[a] = v as usize;
    }
    Some(n)
}

/// Flood-fill component labels: 0 for unset voxels, 1.. in discovery order.
pub fn flood_components(set: &[bool], dims: [usize; 3], full: bool) -> Vec<usize> {
    let idx = |c: [usize; 3]| c[0] + dims[0] * (c[1] + dims[1] * c[2]);
    let nb = neighbours(full);
    let mut comp = vec![0usize; set.len()];
    let mut next = 0;
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                let start = [x, y, z];
                if !set[idx(start)] || comp[idx(start)] != 0 {
                    continue;
                }
                next += 1;
                comp[idx(start)] = next;
                let mut queue = VecDeque::from([start]);
                while let Some(c) = queue.pop_front() {
                    for d in &nb {
                        if let Some(n) = step(dims, c, *d) {
                            if set[idx(n)] && comp[idx(n)] == 0 {
                                comp[idx(n)] = next;
                                queue.push_back(n);
                            }
                        }
                    }
                }
            }
        }
    }
    comp
}

/// Does every flood component of `set` contain a border voxel?
pub fn all_border_connected(set: &[bool], dims: [usize; 3], full: bool) -> bool {
    let comp = flood_components(set, dims, full);
    let n = comp.iter().copied().max().unwrap_or(0);
    let mut touches = vec![false; n + 1];
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                let border = x == 0
                    || y == 0
                    || z == 0
                    || x + 1 == dims[0]
                    || y + 1 == dims[1]
                    || z + 1 == dims[2];
                if border {
                    touches[comp[x + dims[0] * (y + dims[1] * z)]] = true;
                }
            }
        }
    }
    touches[1..].iter().all(|&t| t)
}

/// Surface voxels by definition: set, with a face neighbour unset or
/// outside the volume.
pub fn brute_surface(m: &BinaryMask) -> Vec<[usize; 3]> {
    let dims = m.dims();
    let mut out = Vec::new();
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                if m.at(x, y, z)
                    && neighbours(false)
                        .iter()
                        .any(|d| step(dims, [x, y, z], *d).is_none_or(|n| !m.at(n[0], n[1], n[2])))
                {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// For each voxel of `from`, the distance to its nearest voxel of `to`,
/// by exhaustive search.
pub fn brute_directed(from: &[[usize; 3]], to: &[[usize; 3]], spacing: [f64; 3]) -> Vec<f64> {
    from.iter()
        .map(|a| {
            to.iter()
                .map(|b| {
                    (0..3)
                        .map(|k| {
                            let d = (a[k] as f64 - b[k] as f64) * spacing[k];
                            d * d
                        })
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .collect()
}

/// Percentile with linear interpolation at rank `q (n - 1)`.
pub fn brute_percentile(mut v: Vec<f64>, q: f64) -> f64 {
    v.sort_by(f64::total_cmp);
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

/// Exhaustive hd95 with the default empty-mask scores (0 and 374 mm).
pub fn brute_hd95(a: &BinaryMask, b: &BinaryMask, spacing: [f64; 3]) -> f64 {
    let (sa, sb) = (brute_surface(a), brute_surface(b));
    match (sa.is_empty(), sb.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => 374.0,
        _ => brute_percentile(brute_directed(&sa, &sb, spacing), 0.95)
            .max(brute_percentile(brute_directed(&sb, &sa, spacing), 0.95)),
    }
}
