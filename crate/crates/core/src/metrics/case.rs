use std::fmt;
use std::str::FromStr;

use super::{dice, hd95, lesion_wise, EdgeCasePolicy, LesionMatchConfig};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::volume::{LabelScheme, LabelVolume};

/// Metric names, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Dice,
    Hd95,
    LwDice,
    LwHd95,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Dice, Metric::Hd95, Metric::LwDice, Metric::LwHd95];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Dice => "dice",
            Metric::Hd95 => "hd95",
            Metric::LwDice => "lw_dice",
            Metric::LwHd95 => "lw_hd95",
        }
    }

    /// Overlap scores rank higher-is-better, distances lower-is-better.
    pub fn higher_is_better(self) -> bool {
        matches!(self, Metric::Dice | Metric::LwDice)
    }

    fn is_lesion_wise(self) -> bool {
        matches!(self, Metric::LwDice | Metric::LwHd95)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Data(format!("unknown metric `{s}`")))
    }
}

/// One (patient, strategy, class, metric) observation.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord<T> {
    pub patient_id: String,
    pub strategy_id: String,
    pub class_name: String,
    pub metric: Metric,
    pub value: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig<T> {
    pub policy: EdgeCasePolicy<T>,
    pub lesion: LesionMatchConfig<T>,
}

impl<T: Real> Default for EvalConfig<T> {
    fn default() -> Self {
        EvalConfig {
            policy: EdgeCasePolicy::default(),
            lesion: LesionMatchConfig::default(),
        }
    }
}

/// Scores `pred` against `gt` for every scheme class and requested metric.
///
/// Records come out in scheme class order, then metric order, whatever
/// order `metrics` lists them in. The patient id is the ground truth's
/// case id.
pub fn evaluate_case<T: Real>(
    gt: &LabelVolume,
    pred: &LabelVolume,
    scheme: &LabelScheme,
    metrics: &[Metric],
    strategy_id: &str,
    config: &EvalConfig<T>,
) -> Result<Vec<MetricRecord<T>>> {
    if gt.dims() != pred.dims() {
        return Err(Error::DimsMismatch(gt.dims(), pred.dims()));
    }
    if gt.spacing() != pred.spacing() {
        return Err(Error::SpacingMismatch(gt.spacing(), pred.spacing()));
    }
    scheme.validate_volume(gt)?;
    scheme.validate_volume(pred)?;

    let mut wanted: Vec<Metric> = metrics.to_vec();
    wanted.sort();
    wanted.dedup();
    let spacing = gt.spacing().map(T::from_f64_lossy);

    let mut out = Vec::with_capacity(wanted.len() * 6);
    for (class, labels) in scheme.classes() {
        let labels: Vec<_> = labels.iter().copied().collect();
        let g = gt.mask_of(&labels);
        let p = pred.mask_of(&labels);
        let lw = if wanted.iter().any(|m| m.is_lesion_wise()) {
            Some(lesion_wise(
                &g,
                &p,
                spacing,
                &config.lesion,
                &config.policy,
            )?)
        } else {
            None
        };
        for &metric in &wanted {
            let value = match metric {
                Metric::Dice => dice(&g, &p, &config.policy)?,
                Metric::Hd95 => hd95(&g, &p, spacing, &config.policy)?,
                Metric::LwDice => lw.as_ref().expect("computed above").lw_dice,
                Metric::LwHd95 => lw.as_ref().expect("computed above").lw_hd95,
            };
            out.push(MetricRecord {
                patient_id: gt.case_id().to_string(),
                strategy_id: strategy_id.to_string(),
                class_name: class.to_string(),
                metric,
                value,
            });
        }
    }
    Ok(out)
}
