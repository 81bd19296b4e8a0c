//! Label-volume postprocessing transforms and the registry that names them.
//!
//! Every transform targets a list of labels. In sequential mode each
//! target label is processed on its own binary mask, in listed order, with
//! each pass seeing the output of the previous one. In joint mode the
//! union of the target labels is processed once as a single mask.

mod kernels;
mod registry;

pub use kernels::{
    fill_holes_with_label, keep_top_k, morphological_closing, remove_small_objects,
    replace_small_objects,
};
pub use registry::{builtin_registry, Factory, RegistryEntry, TransformRegistry, Validator};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::volume::{Label, LabelVolume};
use crate::voxelops::Connectivity;

/// How a transform treats multiple target labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Joint,
    #[default]
    Sequential,
}

/// Parameters of one transform step.
///
/// Fields are optional at this level; each transform's validator decides
/// which are required, which are forbidden, and fills in defaults. Field
/// order is the canonical serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replacement: Option<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fill_label: Option<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<Connectivity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

impl TransformParams {
    pub fn labels(mut self, labels: impl Into<Vec<Label>>) -> Self {
        self.labels = Some(labels.into());
        self
    }
    pub fn threshold(mut self, t: usize) -> Self {
        self.threshold = Some(t);
        self
    }
    pub fn replacement(mut self, r: Label) -> Self {
        self.replacement = Some(r);
        self
    }
    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }
    pub fn fill_label(mut self, l: Label) -> Self {
        self.fill_label = Some(l);
        self
    }
    pub fn connectivity(mut self, c: Connectivity) -> Self {
        self.connectivity = Some(c);
        self
    }
    pub fn iterations(mut self, n: usize) -> Self {
        self.iterations = Some(n);
        self
    }
    pub fn mode(mut self, m: Mode) -> Self {
        self.mode = Some(m);
        self
    }

    pub(crate) fn require_labels(&self, transform: &str) -> Result<&[Label]> {
        match self.labels.as_deref() {
            Some(ls) if !ls.is_empty() => Ok(ls),
            Some(_) => Err(Error::params(transform, "`labels` must not be empty")),
            None => Err(Error::params(transform, "missing `labels`")),
        }
    }

    pub(crate) fn require<T: Copy>(transform: &str, value: Option<T>, name: &str) -> Result<T> {
        value.ok_or_else(|| Error::params(transform, format!("missing `{name}`")))
    }
}

/// A configured, stateless transform.
pub trait Transform: Send + Sync {
    fn apply(&self, vol: &LabelVolume) -> Result<LabelVolume>;
}
