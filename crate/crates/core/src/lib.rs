//! Class-specific postprocessing, evaluation, and rank aggregation for
//! multi-class 3D segmentation label volumes.

pub mod cli;
pub mod error;
pub mod metrics;
pub mod ranking;
pub mod scalar;
pub mod strategy;
pub mod transforms;
pub mod volume;
pub mod voxelops;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};
pub use strategy::{apply_strategy, parse_strategy, preset, serialize_strategy, StrategySpec};
pub use volume::{load_volume, save_volume, BinaryMask, Grid, Label, LabelScheme, LabelVolume};
pub use voxelops::{ComponentLabeling, Connectivity};

/// Exact rational scalar, usable wherever a metric only needs [`Scalar`].
pub type Exact = num_rational::Ratio<i64>;
pub type MetricRecord = metrics::MetricRecord<f64>;
pub type EdgeCasePolicy = metrics::EdgeCasePolicy<f64>;
pub type EvalConfig = metrics::EvalConfig<f64>;
pub type LesionMatchConfig = metrics::LesionMatchConfig<f64>;
pub type RankingGrid = ranking::RankingGrid<f64>;
pub type RankReport = ranking::RankReport<f64>;
