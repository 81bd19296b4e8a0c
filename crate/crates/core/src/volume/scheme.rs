use std::collections::BTreeSet;

use super::{Label, LabelVolume};
use crate::error::{Error, Result};

/// Ordered mapping from class name to the label ids it covers.
///
/// Classes with a single label are atomic; their union is the label
/// universe. Composed classes may only reference labels in that universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelScheme {
    classes: Vec<(String, BTreeSet<Label>)>,
}

impl Default for LabelScheme {
    /// Glioma sub-regions: NETC, SNFH, ET, RC and the composed TC and WT.
    fn default() -> Self {
        let c = |name: &str, ls: &[Label]| (name.to_string(), ls.iter().copied().collect());
        LabelScheme {
            classes: vec![
                c("NETC", &[1]),
                c("SNFH", &[2]),
                c("ET", &[3]),
                c("RC", &[4]),
                c("TC", &[1, 3]),
                c("WT", &[1, 2, 3]),
            ],
        }
    }
}

impl LabelScheme {
    pub fn new(classes: Vec<(String, BTreeSet<Label>)>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for (name, labels) in &classes {
            if !names.insert(name.as_str()) {
                return Err(Error::Data(format!("duplicate class `{name}`")));
            }
            if labels.is_empty() {
                return Err(Error::Data(format!("class `{name}` has no labels")));
            }
            if labels.contains(&0) {
                return Err(Error::Data(format!("class `{name}` includes background")));
            }
        }
        let scheme = LabelScheme { classes };
        let universe = scheme.universe();
        for (_, labels) in &scheme.classes {
            if let Some(&l) = labels.iter().find(|l| !universe.contains(l)) {
                return Err(Error::UnknownLabel(l));
            }
        }
        Ok(scheme)
    }

    pub fn classes(&self) -> impl Iterator<Item = (&str, &BTreeSet<Label>)> {
        self.classes.iter().map(|(n, l)| (n.as_str(), l))
    }

    pub fn class_names(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().map(|(n, _)| n.as_str())
    }

    pub fn class(&self, name: &str) -> Option<&BTreeSet<Label>> {
        self.classes.iter().find(|(n, _)| n == name).map(|(_, l)| l)
    }

    /// Position of a class in scheme order.
    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|(n, _)| n == name)
    }

    pub fn universe(&self) -> BTreeSet<Label> {
        self.classes
            .iter()
            .filter(|(_, l)| l.len() == 1)
            .flat_map(|(_, l)| l.iter().copied())
            .collect()
    }

    /// Accepts 0 or any label of the universe.
    pub fn check_label(&self, label: Label, allow_background: bool) -> Result<()> {
        if (allow_background && label == 0) || self.universe().contains(&label) {
            Ok(())
        } else {
            Err(Error::UnknownLabel(label))
        }
    }

    /// Checks that every voxel holds background or a universe label.
    pub fn validate_volume(&self, vol: &LabelVolume) -> Result<()> {
        let universe = self.universe();
        match vol
            .distinct_labels()
            .into_iter()
            .find(|l| *l != 0 && !universe.contains(l))
        {
            Some(l) => Err(Error::UnknownLabel(l)),
            None => Ok(()),
        }
    }
}
