use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::kernels::{self, FnTransform};
use super::{Mode, Transform, TransformParams};
use crate::error::{Error, Result};
use crate::volume::{LabelScheme, LabelVolume};
use crate::voxelops::Connectivity;

/// Checks a step's parameters against a scheme and returns them with
/// defaults filled in.
pub type Validator =
    Arc<dyn Fn(TransformParams, &LabelScheme) -> Result<TransformParams> + Send + Sync>;

/// Builds an executor from validated parameters.
pub type Factory = Arc<dyn Fn(&TransformParams) -> Result<Box<dyn Transform>> + Send + Sync>;

#[derive(Clone)]
pub struct RegistryEntry {
    pub validator: Validator,
    pub factory: Factory,
}

/// Name to transform mapping.
///
/// Extend it during start-up, then share it immutably (for example behind
/// an `Arc`) while strategies run.
#[derive(Clone, Default)]
pub struct TransformRegistry {
    entries: BTreeMap<String, RegistryEntry>,
}

impl std::fmt::Debug for TransformRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.entries.keys()).finish()
    }
}

impl TransformRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding the five built-in transforms.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        let builtins: [(
            &str,
            fn(TransformParams, &LabelScheme) -> Result<TransformParams>,
            _,
        ); 5] = [
            (
                "remove_small_objects",
                validate_remove,
                kernels::remove_small_objects
                    as fn(&LabelVolume, &TransformParams) -> Result<LabelVolume>,
            ),
            (
                "replace_small_objects",
                validate_replace,
                kernels::replace_small_objects,
            ),
            ("keep_top_k", validate_top_k, kernels::keep_top_k),
            (
                "fill_holes_with_label",
                validate_fill_holes,
                kernels::fill_holes_with_label,
            ),
            (
                "morphological_closing",
                validate_closing,
                kernels::morphological_closing,
            ),
        ];
        for (name, validate, run) in builtins {
            r.register(
                name,
                Arc::new(validate),
                Arc::new(move |p: &TransformParams| {
                    Ok(Box::new(FnTransform {
                        params: p.clone(),
                        run,
                    }) as Box<dyn Transform>)
                }),
            )
            .expect("built-in names are distinct");
        }
        r
    }

    pub fn register(
        &mut self,
        name: impl Into<String>,
        validator: Validator,
        factory: Factory,
    ) -> Result<()> {
        let name = name.into();
        if self.entries.contains_key(&name) {
            return Err(Error::DuplicateTransform(name));
        }
        self.entries
            .insert(name, RegistryEntry { validator, factory });
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Result<&RegistryEntry> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownTransform(name.to_string()))
    }

    /// Registered names, sorted.
    pub fn list(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn validate(
        &self,
        name: &str,
        params: TransformParams,
        scheme: &LabelScheme,
    ) -> Result<TransformParams> {
        (self.lookup(name)?.validator)(params, scheme)
    }

    pub fn executor(&self, name: &str, params: &TransformParams) -> Result<Box<dyn Transform>> {
        (self.lookup(name)?.factory)(params)
    }
}

/// Shared read-only registry of the built-in transforms.
pub fn builtin_registry() -> &'static TransformRegistry {
    static REGISTRY: OnceLock<TransformRegistry> = OnceLock::new();
    REGISTRY.get_or_init(TransformRegistry::with_builtins)
}

struct Check<'a> {
    name: &'static str,
    scheme: &'a LabelScheme,
}

impl Check<'_> {
    fn fail(&self, reason: impl Into<String>) -> Error {
        Error::params(self.name, reason)
    }

    fn labels(&self, p: &TransformParams) -> Result<()> {
        let labels = p.require_labels(self.name)?;
        for (i, &l) in labels.iter().enumerate() {
            self.scheme.check_label(l, false)?;
            if labels[..i].contains(&l) {
                return Err(self.fail(format!("label {l} listed twice")));
            }
        }
        Ok(())
    }

    fn forbid(&self, present: bool, key: &str) -> Result<()> {
        if present {
            Err(self.fail(format!("`{key}` does not apply")))
        } else {
            Ok(())
        }
    }

    fn required<T: Copy>(&self, v: Option<T>, key: &str) -> Result<T> {
        TransformParams::require(self.name, v, key)
    }
}

fn validate_small(
    mut p: TransformParams,
    c: &Check,
    replacement_required: bool,
) -> Result<TransformParams> {
    c.labels(&p)?;
    c.required(p.threshold, "threshold")?;
    c.forbid(p.k.is_some(), "k")?;
    c.forbid(p.fill_label.is_some(), "fill_label")?;
    c.forbid(p.iterations.is_some(), "iterations")?;
    let replacement = if replacement_required {
        c.required(p.replacement, "replacement")?
    } else {
        p.replacement.unwrap_or(0)
    };
    if !replacement_required && replacement != 0 {
        return Err(c.fail("`replacement` must be 0; use replace_small_objects"));
    }
    c.scheme.check_label(replacement, true)?;
    p.replacement = Some(replacement);
    p.connectivity.get_or_insert(Connectivity::Full26);
    p.mode.get_or_insert(Mode::Sequential);
    Ok(p)
}

fn validate_remove(p: TransformParams, scheme: &LabelScheme) -> Result<TransformParams> {
    validate_small(
        p,
        &Check {
            name: "remove_small_objects",
            scheme,
        },
        false,
    )
}

fn validate_replace(p: TransformParams, scheme: &LabelScheme) -> Result<TransformParams> {
    validate_small(
        p,
        &Check {
            name: "replace_small_objects",
            scheme,
        },
        true,
    )
}

fn validate_top_k(mut p: TransformParams, scheme: &LabelScheme) -> Result<TransformParams> {
    let c = Check {
        name: "keep_top_k",
        scheme,
    };
    c.labels(&p)?;
    if c.required(p.k, "k")? == 0 {
        return Err(c.fail("`k` must be at least 1"));
    }
    c.forbid(p.threshold.is_some(), "threshold")?;
    c.forbid(p.replacement.is_some(), "replacement")?;
    c.forbid(p.fill_label.is_some(), "fill_label")?;
    c.forbid(p.iterations.is_some(), "iterations")?;
    p.connectivity.get_or_insert(Connectivity::Full26);
    p.mode.get_or_insert(Mode::Sequential);
    Ok(p)
}

fn validate_fill_holes(mut p: TransformParams, scheme: &LabelScheme) -> Result<TransformParams> {
    let c = Check {
        name: "fill_holes_with_label",
        scheme,
    };
    c.labels(&p)?;
    let fill = c.required(p.fill_label, "fill_label")?;
    scheme.check_label(fill, false)?;
    c.forbid(p.threshold.is_some(), "threshold")?;
    c.forbid(p.replacement.is_some(), "replacement")?;
    c.forbid(p.k.is_some(), "k")?;
    c.forbid(p.iterations.is_some(), "iterations")?;
    c.forbid(p.mode.is_some(), "mode")?;
    // background connectivity for the border flood
    p.connectivity.get_or_insert(Connectivity::Face6);
    Ok(p)
}

fn validate_closing(mut p: TransformParams, scheme: &LabelScheme) -> Result<TransformParams> {
    let c = Check {
        name: "morphological_closing",
        scheme,
    };
    c.labels(&p)?;
    c.required(p.iterations, "iterations")?;
    c.forbid(p.threshold.is_some(), "threshold")?;
    c.forbid(p.replacement.is_some(), "replacement")?;
    c.forbid(p.k.is_some(), "k")?;
    c.forbid(p.fill_label.is_some(), "fill_label")?;
    if p.mode == Some(Mode::Joint) {
        return Err(c.fail("joint mode is not supported"));
    }
    p.connectivity.get_or_insert(Connectivity::Full26);
    p.mode = Some(Mode::Sequential);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noop_validator() -> Validator {
        Arc::new(|p, _| Ok(p))
    }

    struct Identity;
    impl Transform for Identity {
        fn apply(&self, vol: &LabelVolume) -> Result<LabelVolume> {
            Ok(vol.clone())
        }
    }

    fn identity_factory() -> Factory {
        Arc::new(|_| Ok(Box::new(Identity) as Box<dyn Transform>))
    }

    #[test]
    fn builtins_present() {
        let r = builtin_registry();
        assert!(r.lookup("remove_small_objects").is_ok());
        assert_eq!(
            r.list(),
            [
                "fill_holes_with_label",
                "keep_top_k",
                "morphological_closing",
                "remove_small_objects",
                "replace_small_objects"
            ]
        );
        assert!(matches!(r.lookup("nope"), Err(Error::UnknownTransform(_))));
    }

    #[test]
    fn duplicate_and_custom_registration() {
        let mut r = TransformRegistry::with_builtins();
        let e = r
            .register("remove_small_objects", noop_validator(), identity_factory())
            .unwrap_err();
        assert!(matches!(e, Error::DuplicateTransform(_)));
        r.register("my_t", noop_validator(), identity_factory())
            .unwrap();
        assert!(r.list().contains(&"my_t"));
        let v = LabelVolume::zeros([2, 2, 2], [1.0; 3], "x").unwrap();
        let ex = r.executor("my_t", &TransformParams::default()).unwrap();
        assert_eq!(ex.apply(&v).unwrap(), v);
    }

    #[test]
    fn validators_fill_defaults_and_reject_strays() {
        let s = LabelScheme::default();
        let r = builtin_registry();
        let p = r
            .validate(
                "remove_small_objects",
                TransformParams::default().labels([4]).threshold(100),
                &s,
            )
            .unwrap();
        assert_eq!(p.replacement, Some(0));
        assert_eq!(p.connectivity, Some(Connectivity::Full26));
        assert_eq!(p.mode, Some(Mode::Sequential));

        let fill = r
            .validate(
                "fill_holes_with_label",
                TransformParams::default().labels([1, 2, 3]).fill_label(2),
                &s,
            )
            .unwrap();
        assert_eq!(fill.connectivity, Some(Connectivity::Face6));
        assert_eq!(fill.mode, None);

        let bad = [
            (
                "remove_small_objects",
                TransformParams::default().labels([4]),
            ),
            (
                "remove_small_objects",
                TransformParams::default().labels([9]).threshold(1),
            ),
            (
                "remove_small_objects",
                TransformParams::default().labels([4]).threshold(1).k(2),
            ),
            (
                "remove_small_objects",
                TransformParams::default()
                    .labels([4])
                    .threshold(1)
                    .replacement(2),
            ),
            (
                "replace_small_objects",
                TransformParams::default().labels([3]).threshold(1),
            ),
            (
                "replace_small_objects",
                TransformParams::default()
                    .labels([3])
                    .threshold(1)
                    .replacement(7),
            ),
            ("keep_top_k", TransformParams::default().labels([4]).k(0)),
            ("keep_top_k", TransformParams::default().labels([4, 4]).k(1)),
            (
                "fill_holes_with_label",
                TransformParams::default().labels([1]).fill_label(0),
            ),
            (
                "morphological_closing",
                TransformParams::default().labels([1]),
            ),
            (
                "morphological_closing",
                TransformParams::default()
                    .labels([1])
                    .iterations(1)
                    .mode(Mode::Joint),
            ),
        ];
        for (name, p) in bad {
            assert!(r.validate(name, p.clone(), &s).is_err(), "{name} {p:?}");
        }
    }
}
