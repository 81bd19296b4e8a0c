use super::{check_same_grid, EdgeCasePolicy};
use crate::error::Result;
use crate::scalar::Real;
use crate::volume::BinaryMask;
use crate::voxelops::Connectivity;

/// Foreground voxels with at least one face neighbour that is background
/// or outside the volume.
pub fn surface_mask(mask: &BinaryMask) -> BinaryMask {
    let grid = *mask.grid();
    let data = mask.as_slice();
    let faces = Connectivity::Face6.offsets();
    BinaryMask::from_vec(
        grid,
        (0..data.len())
            .map(|i| {
                data[i] && {
                    let c = grid.coords(i);
                    faces
                        .iter()
                        .any(|d| grid.offset(c, *d).is_none_or(|j| !data[j]))
                }
            })
            .collect(),
    )
}

/// Coordinates of [`surface_mask`] voxels in linear-index order.
pub fn surface_voxels(mask: &BinaryMask) -> Vec<[usize; 3]> {
    let s = surface_mask(mask);
    s.ones().map(|i| s.grid().coords(i)).collect()
}

/// Lower envelope of parabolas `f[q] + (w (x - q))^2` sampled at every `x`.
/// Infinite entries are not sites.
fn envelope_1d<T: Real>(f: &[T], w: T, out: &mut [T], sites: &mut Vec<usize>, starts: &mut Vec<T>) {
    sites.clear();
    starts.clear();
    let w2 = w * w;
    let two = T::one() + T::one();
    let at = |q: usize| T::from_count(q);
    for q in 0..f.len() {
        if f[q].is_infinite() {
            continue;
        }
        let mut s = T::neg_infinity();
        while let Some(&p) = sites.last() {
            s = ((f[q] + w2 * at(q) * at(q)) - (f[p] + w2 * at(p) * at(p)))
                / (two * w2 * (at(q) - at(p)));
            if s <= *starts.last().unwrap() {
                sites.pop();
                starts.pop();
                s = T::neg_infinity();
            } else {
                break;
            }
        }
        sites.push(q);
        starts.push(s);
    }
    if sites.is_empty() {
        out.iter_mut().for_each(|o| *o = T::infinity());
        return;
    }
    let mut j = 0;
    for (x, o) in out.iter_mut().enumerate() {
        while j + 1 < sites.len() && starts[j + 1] < at(x) {
            j += 1;
        }
        let d = w * (at(x) - at(sites[j]));
        *o = f[sites[j]] + d * d;
    }
}

/// Exact squared Euclidean distance (in mm²) from every voxel of a box to
/// the nearest site, by separable lower-envelope passes.
fn squared_distance_transform<T: Real>(
    sites: &[bool],
    dims: [usize; 3],
    spacing: [T; 3],
) -> Vec<T> {
    let mut field: Vec<T> = sites
        .iter()
        .map(|&s| if s { T::zero() } else { T::infinity() })
        .collect();
    let strides = [1, dims[0], dims[0] * dims[1]];
    let (mut line, mut out) = (Vec::new(), Vec::new());
    let (mut env_sites, mut env_starts) = (Vec::new(), Vec::new());
    for axis in 0..3 {
        let n = dims[axis];
        let stride = strides[axis];
        line.resize(n, T::zero());
        out.resize(n, T::zero());
        let (a1, a2) = [(1, 2), (0, 2), (0, 1)][axis];
        for u in 0..dims[a1] {
            for v in 0..dims[a2] {
                let base = u * strides[a1] + v * strides[a2];
                for k in 0..n {
                    line[k] = field[base + k * stride];
                }
                envelope_1d(
                    &line,
                    spacing[axis],
                    &mut out,
                    &mut env_sites,
                    &mut env_starts,
                );
                for k in 0..n {
                    field[base + k * stride] = out[k];
                }
            }
        }
    }
    field
}

/// For each voxel in `from`, the distance in mm to the nearest voxel of `to`.
///
/// Distances are between voxel centres. `to` must be non-empty.
pub fn directed_surface_distances<T: Real>(
    from: &[[usize; 3]],
    to: &[[usize; 3]],
    spacing: [T; 3],
) -> Vec<T> {
    assert!(!to.is_empty(), "target point set is empty");
    let mut lo = [usize::MAX; 3];
    let mut hi = [0usize; 3];
    for c in from.iter().chain(to) {
        for a in 0..3 {
            lo[a] = lo[a].min(c[a]);
            hi[a] = hi[a].max(c[a]);
        }
    }
    let dims = [0, 1, 2].map(|a| hi[a] - lo[a] + 1);
    let index =
        |c: &[usize; 3]| (c[0] - lo[0]) + dims[0] * ((c[1] - lo[1]) + dims[1] * (c[2] - lo[2]));
    let mut sites = vec![false; dims.iter().product()];
    for c in to {
        sites[index(c)] = true;
    }
    let field = squared_distance_transform(&sites, dims, spacing);
    from.iter().map(|c| field[index(c)].sqrt()).collect()
}

/// Linear-interpolation percentile: rank `q (n - 1)` over sorted values.
pub fn percentile<T: Real>(values: &mut [T], q: f64) -> T {
    assert!(!values.is_empty(), "percentile of an empty list");
    values.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    let n = values.len();
    let rank = T::from_f64_lossy(q) * T::from_count(n - 1);
    let lo = rank.floor();
    let i = lo.to_usize().unwrap_or(0).min(n - 1);
    let j = (i + 1).min(n - 1);
    let frac = rank - lo;
    values[i] + frac * (values[j] - values[i])
}

/// 95th-percentile symmetric Hausdorff distance between mask surfaces, in mm.
///
/// The larger of the two directed 95th percentiles.
pub fn hd95<T: Real>(
    gt: &BinaryMask,
    pred: &BinaryMask,
    spacing: [T; 3],
    policy: &EdgeCasePolicy<T>,
) -> Result<T> {
    check_same_grid(gt, pred)?;
    let a = surface_voxels(gt);
    let b = surface_voxels(pred);
    Ok(match (a.is_empty(), b.is_empty()) {
        (true, true) => policy.both_empty_hd,
        (true, false) | (false, true) => policy.one_empty_hd,
        _ => {
            let mut ab = directed_surface_distances(&a, &b, spacing);
            let mut ba = directed_surface_distances(&b, &a, spacing);
            let p_ab = percentile(&mut ab, 0.95);
            let p_ba = percentile(&mut ba, 0.95);
            p_ab.max(p_ba)
        }
    })
}
