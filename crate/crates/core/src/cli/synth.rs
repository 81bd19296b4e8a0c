//! Seeded synthetic ground-truth / prediction pairs that exercise the
//! situations postprocessing helps or hurts.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::volume::{save_volume, Grid, Label, LabelVolume};

const DIMS: [usize; 3] = [48, 48, 32];
const NETC: Label = 1;
const SNFH: Label = 2;
const ET: Label = 3;
const RC: Label = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Prediction gains 1–3 spurious RC specks of 10–99 voxels.
    SmallFpRc,
    /// A genuine RC lesion under 100 voxels in both volumes.
    TrueSmallRc,
    /// Background pockets carved inside the predicted whole tumour.
    HoleyWt,
    /// Prediction has 2–4 RC components of varied size.
    MultifocalRc,
    /// Prediction equals ground truth.
    Clean,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::SmallFpRc,
        Scenario::TrueSmallRc,
        Scenario::HoleyWt,
        Scenario::MultifocalRc,
        Scenario::Clean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::SmallFpRc => "small-fp-rc",
            Scenario::TrueSmallRc => "true-small-rc",
            Scenario::HoleyWt => "holey-wt",
            Scenario::MultifocalRc => "multifocal-rc",
            Scenario::Clean => "clean",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::Data(format!("unknown scenario `{s}`")))
    }
}

struct Canvas {
    grid: Grid,
    labels: Vec<Label>,
}

impl Canvas {
    fn new() -> Self {
        let grid = Grid::new(DIMS, [1.0; 3]);
        Canvas {
            labels: vec![0; grid.len()],
            grid,
        }
    }

    fn ellipsoid(&mut self, center: [f64; 3], radii: [f64; 3], label_at: impl Fn(f64) -> Label) {
        for i in 0..self.labels.len() {
            let c = self.grid.coords(i);
            let r2: f64 = (0..3)
                .map(|a| ((c[a] as f64 - center[a]) / radii[a]).powi(2))
                .sum();
            if r2 <= 1.0 {
                self.labels[i] = label_at(r2.sqrt());
            }
        }
    }

    /// Box with the given extent whose one-voxel margin is all background.
    fn free_box(&self, rng: &mut ChaCha8Rng, size: [usize; 3]) -> Option<[usize; 3]> {
        for _ in 0..2000 {
            let lo: [usize; 3] = [0, 1, 2].map(|a| rng.gen_range(1..DIMS[a] - size[a] - 1));
            let clear = (lo[2] - 1..lo[2] + size[2] + 1).all(|z| {
                (lo[1] - 1..lo[1] + size[1] + 1).all(|y| {
                    (lo[0] - 1..lo[0] + size[0] + 1)
                        .all(|x| self.labels[self.grid.index(x, y, z)] == 0)
                })
            });
            if clear {
                return Some(lo);
            }
        }
        None
    }

    fn fill_box(&mut self, lo: [usize; 3], size: [usize; 3], label: Label) {
        for z in lo[2]..lo[2] + size[2] {
            for y in lo[1]..lo[1] + size[1] {
                for x in lo[0]..lo[0] + size[0] {
                    let i = self.grid.index(x, y, z);
                    self.labels[i] = label;
                }
            }
        }
    }

    /// Places an isolated box of `label` with a voxel count in `range`.
    fn blob(
        &mut self,
        rng: &mut ChaCha8Rng,
        range: std::ops::RangeInclusive<usize>,
        label: Label,
    ) -> Result<usize> {
        let size = loop {
            let s = [
                rng.gen_range(1..=8),
                rng.gen_range(1..=8),
                rng.gen_range(1..=8),
            ];
            if range.contains(&(s[0] * s[1] * s[2])) {
                break s;
            }
        };
        let lo = self
            .free_box(rng, size)
            .ok_or_else(|| Error::Data("no room left for a synthetic component".into()))?;
        self.fill_box(lo, size, label);
        Ok(size[0] * size[1] * size[2])
    }

    fn into_volume(self, case_id: &str) -> Result<LabelVolume> {
        LabelVolume::new(self.grid.dims, self.grid.spacing, self.labels, case_id)
    }
}

fn tumour(rng: &mut ChaCha8Rng) -> Canvas {
    let mut c = Canvas::new();
    let center = [
        rng.gen_range(14.0..18.0),
        rng.gen_range(20.0..28.0),
        rng.gen_range(13.0..19.0),
    ];
    let radii = [
        rng.gen_range(8.0..10.0),
        rng.gen_range(7.0..9.0),
        rng.gen_range(6.0..8.0),
    ];
    c.ellipsoid(center, radii, |r| {
        if r < 0.35 {
            NETC
        } else if r < 0.6 {
            ET
        } else {
            SNFH
        }
    });
    c
}

fn cavity(c: &mut Canvas, rng: &mut ChaCha8Rng) {
    let center = [
        rng.gen_range(36.0..39.0),
        rng.gen_range(18.0..30.0),
        rng.gen_range(12.0..20.0),
    ];
    let radii = [
        rng.gen_range(4.0..5.5),
        rng.gen_range(4.0..5.5),
        rng.gen_range(4.0..5.5),
    ];
    c.ellipsoid(center, radii, |_| RC);
}

/// Drops a few SNFH voxels on the tumour rim so predictions are imperfect
/// outside the resection cavity too.
fn rim_noise(pred: &mut Canvas, rng: &mut ChaCha8Rng) {
    let g = pred.grid;
    let rim: Vec<usize> = (0..pred.labels.len())
        .filter(|&i| {
            pred.labels[i] == SNFH && {
                let c = g.coords(i);
                crate::voxelops::Connectivity::Face6
                    .offsets()
                    .iter()
                    .any(|d| g.offset(c, *d).is_none_or(|j| pred.labels[j] == 0))
            }
        })
        .collect();
    for &i in &rim {
        if rng.gen_bool(0.05) {
            pred.labels[i] = 0;
        }
    }
}

/// Voxels whose whole 26-neighbourhood lies in the whole tumour.
fn carve_pockets(pred: &mut Canvas, rng: &mut ChaCha8Rng) {
    let g = pred.grid;
    let in_wt = |l: Label| matches!(l, NETC | SNFH | ET);
    let interior: Vec<usize> = (0..pred.labels.len())
        .filter(|&i| {
            let c = g.coords(i);
            in_wt(pred.labels[i])
                && crate::voxelops::Connectivity::Full26
                    .offsets()
                    .iter()
                    .all(|d| g.offset(c, *d).is_some_and(|j| in_wt(pred.labels[j])))
        })
        .collect();
    let pockets = rng.gen_range(2..=4);
    for _ in 0..pockets {
        let i = interior[rng.gen_range(0..interior.len())];
        pred.labels[i] = 0;
    }
}

/// Ground truth and prediction for one case.
pub fn generate_case(
    scenario: Scenario,
    seed: u64,
    index: usize,
) -> Result<(LabelVolume, LabelVolume)> {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let case_id = format!("case_{index:03}");
    let mut gt = tumour(&mut rng);
    let with_cavity = match scenario {
        Scenario::MultifocalRc => true,
        Scenario::TrueSmallRc => rng.gen_bool(0.5),
        _ => rng.gen_bool(0.7),
    };
    if with_cavity {
        cavity(&mut gt, &mut rng);
    }
    if scenario == Scenario::TrueSmallRc {
        gt.blob(&mut rng, 10..=99, RC)?;
    }

    let mut pred = Canvas {
        grid: gt.grid,
        labels: gt.labels.clone(),
    };
    match scenario {
        Scenario::Clean => {}
        Scenario::SmallFpRc => {
            rim_noise(&mut pred, &mut rng);
            for _ in 0..rng.gen_range(1..=3) {
                pred.blob(&mut rng, 10..=99, RC)?;
            }
        }
        Scenario::TrueSmallRc => rim_noise(&mut pred, &mut rng),
        Scenario::HoleyWt => {
            rim_noise(&mut pred, &mut rng);
            carve_pockets(&mut pred, &mut rng);
        }
        Scenario::MultifocalRc => {
            rim_noise(&mut pred, &mut rng);
            for _ in 0..rng.gen_range(1..=3) {
                pred.blob(&mut rng, 20..=400, RC)?;
            }
        }
    }
    Ok((gt.into_volume(&case_id)?, pred.into_volume(&case_id)?))
}

/// Writes `cases` pairs to `out/gt` and `out/pred` as `case_NNN.nii.gz`.
pub fn write_scenario(scenario: Scenario, cases: usize, seed: u64, out: &Path) -> Result<()> {
    let gt_dir = out.join("gt");
    let pred_dir = out.join("pred");
    for d in [&gt_dir, &pred_dir] {
        std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }
    (0..cases).into_par_iter().try_for_each(|i| {
        let (gt, pred) = generate_case(scenario, seed, i)?;
        let name = format!("{}.nii.gz", gt.case_id());
        save_volume(&gt, gt_dir.join(&name))?;
        save_volume(&pred, pred_dir.join(&name))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voxelops::{label_components, Connectivity};

    fn rc_sizes(v: &LabelVolume) -> Vec<usize> {
        label_components(&v.mask_of(&[RC]), Connectivity::Full26)
            .sizes()
            .to_vec()
    }

    #[test]
    fn deterministic() {
        for sc in Scenario::ALL {
            assert_eq!(
                generate_case(sc, 7, 3).unwrap(),
                generate_case(sc, 7, 3).unwrap()
            );
        }
        assert_ne!(
            generate_case(Scenario::Clean, 7, 3).unwrap(),
            generate_case(Scenario::Clean, 8, 3).unwrap()
        );
    }

    #[test]
    fn scenario_semantics() {
        for i in 0..10 {
            let (gt, pred) = generate_case(Scenario::Clean, 1, i).unwrap();
            assert_eq!(gt, pred);

            let (gt, pred) = generate_case(Scenario::SmallFpRc, 1, i).unwrap();
            let extra: Vec<usize> = rc_sizes(&pred).into_iter().filter(|s| *s < 100).collect();
            assert!((1..=3).contains(&extra.len()), "{extra:?}");
            assert!(extra.iter().all(|s| (10..=99).contains(s)));
            assert!(rc_sizes(&gt).iter().all(|s| *s >= 100));

            let (gt, pred) = generate_case(Scenario::TrueSmallRc, 1, i).unwrap();
            assert_eq!(gt.mask_of(&[RC]), pred.mask_of(&[RC]));
            assert!(rc_sizes(&gt).iter().any(|s| *s < 100));

            let (gt, pred) = generate_case(Scenario::MultifocalRc, 1, i).unwrap();
            let n = rc_sizes(&pred).len();
            assert!((2..=4).contains(&n), "{n}");
            assert_eq!(rc_sizes(&gt).len(), 1);

            let (gt, pred) = generate_case(Scenario::HoleyWt, 1, i).unwrap();
            let wt = pred.mask_of(&[1, 2, 3]);
            let filled = crate::voxelops::fill_holes_mask(&wt, Connectivity::Face6);
            assert!(filled.count() > wt.count());
            assert_eq!(gt.mask_of(&[RC]), pred.mask_of(&[RC]));
        }
    }

    #[test]
    fn scenario_names() {
        for sc in Scenario::ALL {
            assert_eq!(sc.name().parse::<Scenario>().unwrap(), sc);
        }
        assert!("bogus".parse::<Scenario>().is_err());
    }
}
