//! Entities of a finite quasi-set model: m-atoms, M-atoms and qsets.
//!
//! m-atoms carry a hidden label that is only used for counting. None of the
//! types here implement `PartialEq`; comparisons go through
//! [`indistinguishable`](super::indistinguishable) and
//! [`extensionally_equal`](super::extensionally_equal).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::signature::{Class, Signature};

pub(crate) type UniverseId = u64;

/// Indistinguishability kind of an m-atom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Kind(Arc<str>);

impl Kind {
    pub fn new(label: &str) -> Self {
        Kind(Arc::from(label))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The three mutually exclusive sorts of the language.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sort {
    MicroAtom,
    MacroAtom,
    QSet,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::MicroAtom => "m-atom",
            Sort::MacroAtom => "M-atom",
            Sort::QSet => "qset",
        })
    }
}

/// An m-atom. Its hidden label never leaves the crate.
#[derive(Clone)]
pub struct MicroAtom {
    pub(crate) universe: UniverseId,
    pub(crate) label: u32,
    pub(crate) kind: Kind,
}

impl MicroAtom {
    pub fn kind(&self) -> &Kind {
        &self.kind
    }
}

/// A classical atom, identified by its name.
#[derive(Clone)]
pub struct MacroAtom {
    pub(crate) universe: UniverseId,
    pub(crate) name: Arc<str>,
}

impl MacroAtom {
    pub fn name(&self) -> &str {
        &self.name
    }
}

/// A finite quasi-set. Elements are kept in a canonical internal order and
/// deduplicated by identity (hidden label for m-atoms, name for M-atoms,
/// extensional content for qsets).
#[derive(Clone)]
pub struct QSet {
    inner: Arc<QSetInner>,
}

struct QSetInner {
    universe: UniverseId,
    elements: Vec<Entity>,
    signature: Arc<Signature>,
    micro_in_closure: bool,
}

/// Any object of the model.
#[derive(Clone)]
pub enum Entity {
    Micro(MicroAtom),
    Macro(MacroAtom),
    QSet(QSet),
}

impl Entity {
    pub fn sort(&self) -> Sort {
        match self {
            Entity::Micro(_) => Sort::MicroAtom,
            Entity::Macro(_) => Sort::MacroAtom,
            Entity::QSet(_) => Sort::QSet,
        }
    }

    /// `m(x)`
    pub fn is_micro(&self) -> bool {
        matches!(self, Entity::Micro(_))
    }

    /// `M(x)`
    pub fn is_macro(&self) -> bool {
        matches!(self, Entity::Macro(_))
    }

    /// `Q(x)`
    pub fn is_qset(&self) -> bool {
        matches!(self, Entity::QSet(_))
    }

    pub fn kind(&self) -> Option<&Kind> {
        match self {
            Entity::Micro(a) => Some(&a.kind),
            _ => None,
        }
    }

    pub fn as_qset(&self) -> Option<&QSet> {
        match self {
            Entity::QSet(q) => Some(q),
            _ => None,
        }
    }

    /// Members of the entity; atoms have none.
    pub fn members(&self) -> &[Entity] {
        match self {
            Entity::QSet(q) => q.elements(),
            _ => &[],
        }
    }

    pub(crate) fn universe(&self) -> UniverseId {
        match self {
            Entity::Micro(a) => a.universe,
            Entity::Macro(a) => a.universe,
            Entity::QSet(q) => q.inner.universe,
        }
    }

    /// The ≡-class this entity falls in.
    pub fn class(&self) -> Class {
        match self {
            Entity::Micro(a) => Class::Micro(a.kind.clone()),
            Entity::Macro(a) => Class::Macro(a.name.clone()),
            Entity::QSet(q) => Class::QSet(q.inner.signature.clone()),
        }
    }

    pub(crate) fn micro_in_closure(&self) -> bool {
        match self {
            Entity::Micro(_) => true,
            Entity::Macro(_) => false,
            Entity::QSet(q) => q.inner.micro_in_closure,
        }
    }
}

impl From<QSet> for Entity {
    fn from(q: QSet) -> Self {
        Entity::QSet(q)
    }
}

impl QSet {
    /// Builds a qset from raw elements, sorting and deduplicating by identity.
    /// Callers are responsible for the universe check.
    pub(crate) fn from_elements(universe: UniverseId, mut elements: Vec<Entity>) -> QSet {
        elements.sort_by(identity_cmp);
        elements.dedup_by(|a, b| identity_cmp(a, b) == Ordering::Equal);
        QSet::from_sorted(universe, elements)
    }

    /// `elements` must already be sorted and deduplicated by identity.
    pub(crate) fn from_sorted(universe: UniverseId, elements: Vec<Entity>) -> QSet {
        debug_assert!(elements
            .windows(2)
            .all(|w| identity_cmp(&w[0], &w[1]) == Ordering::Less));
        let signature = Arc::new(Signature::from_classes(elements.iter().map(Entity::class)));
        let micro_in_closure = elements.iter().any(Entity::micro_in_closure);
        QSet {
            inner: Arc::new(QSetInner {
                universe,
                elements,
                signature,
                micro_in_closure,
            }),
        }
    }

    pub fn elements(&self) -> &[Entity] {
        &self.inner.elements
    }

    /// Quasi-cardinal: number of elements counted by identity.
    pub fn qc(&self) -> u64 {
        self.inner.elements.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.inner.elements.is_empty()
    }

    pub fn signature(&self) -> &Signature {
        &self.inner.signature
    }

    /// `t ∈ x`, by identity.
    pub fn contains(&self, t: &Entity) -> bool {
        self.position(t).is_some()
    }

    pub(crate) fn position(&self, t: &Entity) -> Option<usize> {
        self.inner
            .elements
            .binary_search_by(|e| identity_cmp(e, t))
            .ok()
    }

    /// `self ⊆ other`
    pub fn is_subset(&self, other: &QSet) -> bool {
        self.qc() <= other.qc() && self.elements().iter().all(|t| other.contains(t))
    }

    /// Pure qsets have only m-atoms as elements.
    pub fn is_pure(&self) -> bool {
        self.elements().iter().all(Entity::is_micro)
    }

    /// `E(x)`: every element is a qset.
    pub fn has_only_qset_elements(&self) -> bool {
        self.elements().iter().all(Entity::is_qset)
    }

    pub(crate) fn universe(&self) -> UniverseId {
        self.inner.universe
    }

    pub(crate) fn same_identity(&self, other: &QSet) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || cmp_slices(self.elements(), other.elements()) == Ordering::Equal
    }
}

fn sort_rank(e: &Entity) -> u8 {
    match e {
        Entity::Micro(_) => 0,
        Entity::Macro(_) => 1,
        Entity::QSet(_) => 2,
    }
}

fn cmp_slices(a: &[Entity], b: &[Entity]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match identity_cmp(x, y) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

/// Total order on entities by identity. Internal only: it is the one place
/// where hidden labels are compared.
pub(crate) fn identity_cmp(a: &Entity, b: &Entity) -> Ordering {
    match (a, b) {
        (Entity::Micro(x), Entity::Micro(y)) => (x.universe, x.label).cmp(&(y.universe, y.label)),
        (Entity::Macro(x), Entity::Macro(y)) => (x.universe, &x.name).cmp(&(y.universe, &y.name)),
        (Entity::QSet(x), Entity::QSet(y)) => {
            if Arc::ptr_eq(&x.inner, &y.inner) {
                return Ordering::Equal;
            }
            x.inner
                .universe
                .cmp(&y.inner.universe)
                .then_with(|| cmp_slices(x.elements(), y.elements()))
        }
        _ => sort_rank(a).cmp(&sort_rank(b)),
    }
}

/// Wrapper ordering entities by identity, for use as a map key.
#[derive(Clone)]
pub(crate) struct IdentityKey(pub(crate) Entity);

impl PartialEq for IdentityKey {
    fn eq(&self, other: &Self) -> bool {
        identity_cmp(&self.0, &other.0) == Ordering::Equal
    }
}

impl Eq for IdentityKey {}

impl PartialOrd for IdentityKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IdentityKey {
    fn cmp(&self, other: &Self) -> Ordering {
        identity_cmp(&self.0, &other.0)
    }
}

// Debug output shows kinds and structure only, never hidden labels.
impl fmt::Debug for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entity::Micro(a) => write!(f, "m:{}", a.kind),
            Entity::Macro(a) => write!(f, "M:{}", a.name),
            Entity::QSet(q) => fmt::Display::fmt(q, f),
        }
    }
}

impl fmt::Debug for QSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for MicroAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m:{}", self.kind)
    }
}

impl fmt::Debug for MacroAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M:{}", self.name)
    }
}
