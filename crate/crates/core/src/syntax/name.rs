use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// An identifier. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

static INTERNAL_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Name {
    pub fn new(text: impl AsRef<str>) -> Self {
        Name(Arc::from(text.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// A globally unique name that no parser can produce. Used when opening
    /// binders for internal traversals; such names are always closed again
    /// before a term leaves the traversal.
    pub fn internal(hint: &Name) -> Self {
        let n = INTERNAL_COUNTER.fetch_add(1, Ordering::Relaxed);
        Name::new(format!("{}#{}", hint.stem(), n))
    }

    pub fn is_internal(&self) -> bool {
        self.0.contains('#')
    }

    /// The name without trailing digits or an internal stamp.
    pub fn stem(&self) -> &str {
        let base = self.0.split('#').next().unwrap_or("");
        let trimmed = base.trim_end_matches(|c: char| c.is_ascii_digit());
        if trimmed.is_empty() {
            base
        } else {
            trimmed
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// Picks `base` if it is free, otherwise the first free one of `stem`,
/// `stem1`, `stem2`, ... where `stem` is `base` with trailing digits removed.
/// Deterministic in its inputs.
pub fn fresh_name(base: &Name, avoid: &BTreeSet<Name>) -> Name {
    if !avoid.contains(base) && !base.is_internal() {
        return base.clone();
    }
    let stem = base.stem();
    std::iter::once(Name::new(stem))
        .chain((1u64..).map(|i| Name::new(format!("{stem}{i}"))))
        .find(|candidate| !avoid.contains(candidate))
        .expect("unbounded candidate supply")
}

/// Display name attached to a binder.
///
/// Equality and hashing ignore the contained name, so deriving `PartialEq` on
/// a term type that stores binders as `Binder` yields α-equivalence.
#[derive(Clone)]
pub struct Binder(pub Name);

impl Binder {
    pub fn new(name: impl Into<Name>) -> Self {
        Binder(name.into())
    }

    pub fn name(&self) -> &Name {
        &self.0
    }
}

impl PartialEq for Binder {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> BTreeSet<Name> {
        names.iter().map(Name::new).collect()
    }

    #[test]
    fn fresh_name_examples() {
        let x = Name::new("x");
        assert_eq!(fresh_name(&x, &set(&["x"])).as_str(), "x1");
        assert_eq!(fresh_name(&x, &set(&[])).as_str(), "x");
        assert_eq!(fresh_name(&x, &set(&["x", "x1"])).as_str(), "x2");
    }

    #[test]
    fn fresh_name_strips_stamp_and_digits() {
        let n = Name::internal(&Name::new("y3"));
        assert!(n.is_internal());
        assert_eq!(fresh_name(&n, &set(&["y"])).as_str(), "y1");
        assert_eq!(fresh_name(&Name::new("y3"), &set(&["y3"])).as_str(), "y");
        assert_eq!(fresh_name(&Name::new("y3"), &set(&["y3", "y"])).as_str(), "y1");
    }

    #[test]
    fn binders_compare_equal() {
        assert_eq!(Binder::new("a"), Binder::new("b"));
    }
}
