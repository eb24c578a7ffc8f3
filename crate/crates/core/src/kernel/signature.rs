use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::entity::Kind;

/// The ≡-class of a single entity.
///
/// m-atoms fall into their kind, M-atoms into a class of their own, and qsets
/// into the class of their [`Signature`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Micro(Kind),
    Macro(Arc<str>),
    QSet(Arc<Signature>),
}

/// Multiset of element classes of a qset.
///
/// For a pure qset this is the per-kind multiplicity map. For a set every
/// element sits in a singleton class, so the signature is its extensional
/// content.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(BTreeMap<Class, u64>);

impl Signature {
    pub(crate) fn from_classes(classes: impl IntoIterator<Item = Class>) -> Self {
        let mut map = BTreeMap::new();
        for c in classes {
            *map.entry(c).or_insert(0) += 1;
        }
        Signature(map)
    }

    /// Classes with their multiplicities, in canonical order.
    pub fn classes(&self) -> impl Iterator<Item = (&Class, u64)> {
        self.0.iter().map(|(c, n)| (c, *n))
    }

    pub fn multiplicity(&self, class: &Class) -> u64 {
        self.0.get(class).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    /// Multiplicity of m-atoms of one kind.
    pub fn kind_count(&self, kind: &Kind) -> u64 {
        self.multiplicity(&Class::Micro(kind.clone()))
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Micro(k) => write!(f, "{k}"),
            Class::Macro(name) => write!(f, "M:{name}"),
            Class::QSet(sig) => write!(f, "{sig}"),
        }
    }
}

impl fmt::Debug for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (c, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if *n == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{n}×{c}")?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
