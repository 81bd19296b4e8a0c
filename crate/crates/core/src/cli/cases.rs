use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::volume::nifti::{case_id_from_path, is_volume_path};

/// Volume files in `dir`, keyed by case id.
pub fn discover(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = BTreeMap::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if !path.is_file() || !is_volume_path(&path) {
            continue;
        }
        let id = case_id_from_path(&path);
        if let Some(prev) = out.insert(id.clone(), path.clone()) {
            return Err(Error::Data(format!(
                "case `{id}` appears twice: {} and {}",
                prev.display(),
                path.display()
            )));
        }
    }
    Ok(out)
}

/// A case with its ground truth and prediction files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CasePair {
    pub case_id: String,
    pub gt: PathBuf,
    pub pred: PathBuf,
}

/// Pairs every prediction with the ground truth of the same stem.
///
/// A prediction without a ground truth is an error; ground truths without
/// a prediction are skipped.
pub fn pair_cases(gt_dir: &Path, pred_dir: &Path) -> Result<Vec<CasePair>> {
    let gts = discover(gt_dir)?;
    let preds = discover(pred_dir)?;
    preds
        .into_iter()
        .map(|(case_id, pred)| match gts.get(&case_id) {
            Some(gt) => Ok(CasePair {
                case_id,
                gt: gt.clone(),
                pred,
            }),
            None => Err(Error::Data(format!(
                "prediction `{case_id}` has no ground truth in {}",
                gt_dir.display()
            ))),
        })
        .collect()
}
