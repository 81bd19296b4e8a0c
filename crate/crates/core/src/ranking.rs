//! Rank aggregation across strategies.
//!
//! Every (patient, class, metric) cell ranks the strategies against each
//! other, tied values sharing the mean of the positions they span. Ranks are
//! averaged per patient, then the per-patient averages are averaged into a
//! global rank. Lower is better.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::metrics::{Metric, MetricRecord};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    HigherIsBetter,
    LowerIsBetter,
}

impl From<Metric> for Direction {
    fn from(m: Metric) -> Self {
        if m.higher_is_better() {
            Direction::HigherIsBetter
        } else {
            Direction::LowerIsBetter
        }
    }
}

/// Fractional ranks of `values`, best = 1.
///
/// Ties use exact equality.
pub fn rank_cell<T: Real>(values: &[T], direction: Direction) -> Result<Vec<T>> {
    if values.len() < 2 {
        return Err(Error::TooFew {
            what: "strategies",
            needed: 2,
            got: values.len(),
        });
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(v.to_f64_lossy()));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let c = values[a].partial_cmp(&values[b]).expect("finite");
        match direction {
            Direction::HigherIsBetter => c.reverse(),
            Direction::LowerIsBetter => c,
        }
    });
    let two = T::one() + T::one();
    let mut ranks = vec![T::zero(); values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && values[order[end + 1]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end+1
        let shared = T::from_count(start + 1 + end + 1) / two;
        for &i in &order[start..=end] {
            ranks[i] = shared;
        }
        start = end + 1;
    }
    Ok(ranks)
}

/// Key of one ranking cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey {
    pub patient_id: String,
    pub class_name: String,
    pub metric: Metric,
}

/// Values per strategy for every (patient, class, metric) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingGrid<T> {
    strategies: Vec<String>,
    cells: BTreeMap<CellKey, Vec<Option<T>>>,
}

impl<T: Real> RankingGrid<T> {
    pub fn new(strategies: Vec<String>) -> Result<Self> {
        let distinct: BTreeSet<&String> = strategies.iter().collect();
        if distinct.len() != strategies.len() {
            return Err(Error::Data("duplicate strategy id".into()));
        }
        Ok(RankingGrid {
            strategies,
            cells: BTreeMap::new(),
        })
    }

    /// Grid from one record table per strategy; the table's position gives
    /// the strategy, the records' own `strategy_id` is not consulted.
    pub fn from_tables(tables: Vec<(String, Vec<MetricRecord<T>>)>) -> Result<Self> {
        let mut grid = Self::new(tables.iter().map(|(s, _)| s.clone()).collect())?;
        for (s, (_, records)) in tables.into_iter().enumerate() {
            for r in records {
                let key = CellKey {
                    patient_id: r.patient_id,
                    class_name: r.class_name,
                    metric: r.metric,
                };
                grid.set(key, s, r.value)?;
            }
        }
        grid.check_complete()?;
        Ok(grid)
    }

    /// Stores a value; a cell may be set only once per strategy.
    pub fn set(&mut self, key: CellKey, strategy: usize, value: T) -> Result<()> {
        let s = self.strategies.len();
        if strategy >= s {
            return Err(Error::Data(format!(
                "strategy index {strategy} out of range"
            )));
        }
        let slot = &mut self
            .cells
            .entry(key.clone())
            .or_insert_with(|| vec![None; s])[strategy];
        if slot.is_some() {
            return Err(Error::Data(format!(
                "duplicate value for {key:?} from `{}`",
                self.strategies[strategy]
            )));
        }
        *slot = Some(value);
        Ok(())
    }

    pub fn strategies(&self) -> &[String] {
        &self.strategies
    }

    pub fn patients(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.cells.keys().map(|k| k.patient_id.as_str()).collect();
        set.into_iter().collect()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&CellKey, &[Option<T>])> {
        self.cells.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn check_complete(&self) -> Result<()> {
        for (key, vals) in &self.cells {
            if let Some(s) = vals.iter().position(Option::is_none) {
                return Err(Error::IncompleteGrid(format!(
                    "strategy `{}` has no value for patient `{}`, class `{}`, metric `{}`",
                    self.strategies[s], key.patient_id, key.class_name, key.metric
                )));
            }
        }
        Ok(())
    }

    fn cell_values(key: &CellKey, vals: &[Option<T>]) -> Result<Vec<T>> {
        vals.iter()
            .map(|v| {
                v.ok_or_else(|| {
                    Error::IncompleteGrid(format!(
                        "missing value for patient `{}`, class `{}`, metric `{}`",
                        key.patient_id, key.class_name, key.metric
                    ))
                })
            })
            .collect()
    }
}

/// Mean rank of each strategy over one patient's cells.
pub fn per_patient_rank<T: Real>(grid: &RankingGrid<T>, patient_id: &str) -> Result<Vec<T>> {
    let s = grid.strategies.len();
    let mut sums = vec![T::zero(); s];
    let mut n = 0usize;
    for (key, vals) in grid
        .cells
        .iter()
        .filter(|(k, _)| k.patient_id == patient_id)
    {
        let values = RankingGrid::cell_values(key, vals)?;
        let ranks = rank_cell(&values, key.metric.into())?;
        for (acc, r) in sums.iter_mut().zip(ranks) {
            *acc = *acc + r;
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::IncompleteGrid(format!(
            "no cells for patient `{patient_id}`"
        )));
    }
    let n = T::from_count(n);
    Ok(sums.into_iter().map(|v| v / n).collect())
}

/// Per-patient and global average ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct RankReport<T> {
    pub strategies: Vec<String>,
    /// Patient id to average rank per strategy, in `strategies` order.
    pub per_patient: BTreeMap<String, Vec<T>>,
    /// Global average rank per strategy, in `strategies` order.
    pub global: Vec<T>,
}

impl<T: Real> RankReport<T> {
    /// Strategies by ascending global rank; ties keep input order.
    pub fn ordering(&self) -> Vec<(&str, T)> {
        let mut out: Vec<(&str, T)> = self
            .strategies
            .iter()
            .map(String::as_str)
            .zip(self.global.iter().copied())
            .collect();
        out.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite ranks"));
        out
    }

    pub fn winner(&self) -> &str {
        self.ordering()[0].0
    }
}

pub fn global_rank<T: Real>(grid: &RankingGrid<T>) -> Result<RankReport<T>> {
    grid.check_complete()?;
    let patients = grid.patients();
    if patients.is_empty() {
        return Err(Error::TooFew {
            what: "patients",
            needed: 1,
            got: 0,
        });
    }
    let s = grid.strategies.len();
    let mut per_patient = BTreeMap::new();
    let mut sums = vec![T::zero(); s];
    for p in &patients {
        let ranks = per_patient_rank(grid, p)?;
        for (acc, &r) in sums.iter_mut().zip(&ranks) {
            *acc = *acc + r;
        }
        per_patient.insert(p.to_string(), ranks);
    }
    let n = T::from_count(patients.len());
    Ok(RankReport {
        strategies: grid.strategies.clone(),
        per_patient,
        global: sums.into_iter().map(|v| v / n).collect(),
    })
}
