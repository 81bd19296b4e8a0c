//! JSON strategy files: parsing, canonical serialization, execution, and
//! the three built-in presets.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transforms::{builtin_registry, Transform, TransformParams, TransformRegistry};
use crate::volume::{LabelScheme, LabelVolume};

/// One step of a strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub transform: String,
    #[serde(default)]
    pub params: TransformParams,
}

/// A named, validated sequence of transform steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub name: String,
    pub steps: Vec<Step>,
}

const STRATEGY_1: &str = r#"{"name":"strategy_1","steps":[{"transform":"remove_small_objects","params":{"labels":[4],"threshold":100,"replacement":0,"connectivity":26,"mode":"sequential"}}]}"#;

const STRATEGY_2: &str = r#"{"name":"strategy_2","steps":[{"transform":"remove_small_objects","params":{"labels":[4],"threshold":100,"replacement":0,"connectivity":26,"mode":"sequential"}},{"transform":"keep_top_k","params":{"labels":[4],"k":1,"connectivity":26,"mode":"sequential"}},{"transform":"fill_holes_with_label","params":{"labels":[1,2,3],"fill_label":2,"connectivity":6}}]}"#;

const STRATEGY_3: &str = r#"{"name":"strategy_3","steps":[{"transform":"replace_small_objects","params":{"labels":[3],"threshold":100,"replacement":2,"connectivity":26,"mode":"sequential"}},{"transform":"replace_small_objects","params":{"labels":[4],"threshold":100,"replacement":2,"connectivity":26,"mode":"sequential"}},{"transform":"remove_small_objects","params":{"labels":[2],"threshold":64,"replacement":0,"connectivity":26,"mode":"sequential"}}]}"#;

/// Names and canonical documents of the built-in strategies.
pub const PRESETS: [(&str, &str); 3] = [
    ("strategy_1", STRATEGY_1),
    ("strategy_2", STRATEGY_2),
    ("strategy_3", STRATEGY_3),
];

/// Parses and validates a strategy document against `registry` and `scheme`.
pub fn parse_strategy_with(
    text: &str,
    registry: &TransformRegistry,
    scheme: &LabelScheme,
) -> Result<StrategySpec> {
    let raw: StrategySpec =
        serde_json::from_str(text).map_err(|e| Error::InvalidStrategy(e.to_string()))?;
    if raw.name.trim().is_empty() {
        return Err(Error::InvalidStrategy("strategy name is empty".into()));
    }
    let steps = raw
        .steps
        .into_iter()
        .map(|s| {
            let params = registry.validate(&s.transform, s.params, scheme)?;
            Ok(Step {
                transform: s.transform,
                params,
            })
        })
        .collect::<Result<_>>()?;
    Ok(StrategySpec {
        name: raw.name,
        steps,
    })
}

/// Parses with the built-in registry and the default label scheme.
pub fn parse_strategy(text: &str) -> Result<StrategySpec> {
    parse_strategy_with(text, builtin_registry(), &LabelScheme::default())
}

/// Canonical compact JSON: fixed key order, defaults materialized.
pub fn serialize_strategy(spec: &StrategySpec) -> String {
    serde_json::to_string(spec).expect("strategy specs always serialize")
}

pub fn preset(name: &str) -> Result<StrategySpec> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    parse_strategy(text)
}

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

/// Resolves a preset name, or else reads and parses a strategy file.
///
/// A name that is neither a preset nor an existing file is an unknown preset.
pub fn resolve_strategy(
    name_or_path: &str,
    registry: &TransformRegistry,
    scheme: &LabelScheme,
) -> Result<StrategySpec> {
    if let Some((_, text)) = PRESETS.iter().find(|(n, _)| *n == name_or_path) {
        return parse_strategy_with(text, registry, scheme);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(Error::UnknownPreset(name_or_path.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_strategy_with(&text, registry, scheme)
}

/// A strategy with its executors instantiated, ready to run on many volumes.
pub struct CompiledStrategy {
    name: String,
    executors: Vec<Box<dyn Transform>>,
}

impl CompiledStrategy {
    pub fn new(spec: &StrategySpec, registry: &TransformRegistry) -> Result<Self> {
        let executors = spec
            .steps
            .iter()
            .map(|s| registry.executor(&s.transform, &s.params))
            .collect::<Result<_>>()?;
        Ok(CompiledStrategy {
            name: spec.name.clone(),
            executors,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, vol: &LabelVolume) -> Result<LabelVolume> {
        self.executors
            .iter()
            .try_fold(vol.clone(), |cur, t| t.apply(&cur))
    }
}

/// Runs every step of `spec` in order.
pub fn apply_strategy_with(
    vol: &LabelVolume,
    spec: &StrategySpec,
    registry: &TransformRegistry,
) -> Result<LabelVolume> {
    CompiledStrategy::new(spec, registry)?.apply(vol)
}

pub fn apply_strategy(vol: &LabelVolume, spec: &StrategySpec) -> Result<LabelVolume> {
    apply_strategy_with(vol, spec, builtin_registry())
}
