use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use super::entity::{Entity, IdentityKey, Kind, MacroAtom, MicroAtom, QSet, UniverseId};
use super::signature::{Class, Signature};
use super::KernelError;

static NEXT_UNIVERSE: AtomicU64 = AtomicU64::new(1);

/// A sealed finite carrier: declared m-atom populations per kind, named
/// M-atoms and a registry of qsets that weak pairs range over.
#[derive(Clone)]
pub struct Universe {
    inner: Arc<Inner>,
}

struct Inner {
    id: UniverseId,
    kinds: Vec<(Kind, u32)>,
    atoms_by_kind: BTreeMap<Kind, Vec<Entity>>,
    macro_atoms: Vec<Entity>,
    registry: Vec<QSet>,
    registry_by_signature: BTreeMap<Signature, Vec<QSet>>,
}

/// Collects kinds and M-atoms, then seals them into a [`Universe`].
#[derive(Default, Debug, Clone)]
pub struct UniverseBuilder {
    kinds: Vec<(String, u32)>,
    macro_atoms: Vec<String>,
}

impl UniverseBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kind(mut self, label: &str, population: u32) -> Self {
        self.kinds.push((label.to_owned(), population));
        self
    }

    pub fn m_atom(mut self, name: &str) -> Self {
        self.macro_atoms.push(name.to_owned());
        self
    }

    pub fn build(self) -> Result<Universe, KernelError> {
        let mut seen = BTreeSet::new();
        for (label, _) in &self.kinds {
            if !seen.insert(label.as_str()) {
                return Err(KernelError::DuplicateLabel(label.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for name in &self.macro_atoms {
            if !seen.insert(name.as_str()) {
                return Err(KernelError::DuplicateLabel(name.clone()));
            }
        }

        let id = NEXT_UNIVERSE.fetch_add(1, AtomicOrdering::Relaxed);
        let mut next_label = 0u32;
        let mut kinds = Vec::with_capacity(self.kinds.len());
        let mut atoms_by_kind = BTreeMap::new();
        for (label, population) in self.kinds {
            let kind = Kind::new(&label);
            let atoms = (0..population)
                .map(|_| {
                    let atom = Entity::Micro(MicroAtom {
                        universe: id,
                        label: next_label,
                        kind: kind.clone(),
                    });
                    next_label += 1;
                    atom
                })
                .collect();
            atoms_by_kind.insert(kind.clone(), atoms);
            kinds.push((kind, population));
        }
        let mut macro_atoms: Vec<Entity> = self
            .macro_atoms
            .iter()
            .map(|name| {
                Entity::Macro(MacroAtom {
                    universe: id,
                    name: Arc::from(name.as_str()),
                })
            })
            .collect();
        macro_atoms.sort_by(super::entity::identity_cmp);

        Ok(Universe {
            inner: Arc::new(Inner {
                id,
                kinds,
                atoms_by_kind,
                macro_atoms,
                registry: Vec::new(),
                registry_by_signature: BTreeMap::new(),
            }),
        })
    }
}

impl Universe {
    pub fn builder() -> UniverseBuilder {
        UniverseBuilder::new()
    }

    /// Parses a universe description:
    /// `{"kinds": {"a": 3, ...}, "M_atoms": ["A", ...]}`.
    pub fn from_json(text: &str) -> Result<Universe, KernelError> {
        let file: UniverseFile =
            serde_json::from_str(text).map_err(|e| KernelError::Format(e.to_string()))?;
        let mut builder = UniverseBuilder::new();
        for (label, population) in file.kinds.0 {
            builder = builder.kind(&label, population);
        }
        for name in &file.macro_atoms {
            builder = builder.m_atom(name);
        }
        builder.build()
    }

    pub(crate) fn id(&self) -> UniverseId {
        self.inner.id
    }

    /// Declared kinds with their populations, in declaration order.
    pub fn kinds(&self) -> impl Iterator<Item = (&Kind, u32)> {
        self.inner.kinds.iter().map(|(k, n)| (k, *n))
    }

    pub fn kind(&self, label: &str) -> Option<&Kind> {
        self.inner
            .kinds
            .iter()
            .map(|(k, _)| k)
            .find(|k| k.label() == label)
    }

    /// All m-atoms of one kind, in canonical order.
    pub fn atoms_of(&self, label: &str) -> &[Entity] {
        self.inner
            .atoms_by_kind
            .get(&Kind::new(label))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub(crate) fn atoms_of_kind(&self, kind: &Kind) -> &[Entity] {
        self.inner
            .atoms_by_kind
            .get(kind)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn micro_atoms(&self) -> impl Iterator<Item = &Entity> {
        self.inner.atoms_by_kind.values().flatten()
    }

    pub fn macro_atoms(&self) -> &[Entity] {
        &self.inner.macro_atoms
    }

    pub fn macro_atom(&self, name: &str) -> Option<Entity> {
        self.inner
            .macro_atoms
            .iter()
            .find(|e| matches!(e, Entity::Macro(a) if a.name() == name))
            .cloned()
    }

    /// Every atom of the universe, m-atoms first.
    pub fn urelements(&self) -> Vec<Entity> {
        self.micro_atoms()
            .chain(self.macro_atoms())
            .cloned()
            .collect()
    }

    pub fn empty(&self) -> QSet {
        QSet::from_sorted(self.inner.id, Vec::new())
    }

    /// Builds a qset over entities of this universe.
    pub fn qset(&self, elements: impl IntoIterator<Item = Entity>) -> Result<QSet, KernelError> {
        let elements: Vec<Entity> = elements.into_iter().collect();
        if elements.iter().any(|e| e.universe() != self.inner.id) {
            return Err(KernelError::DomainMismatch);
        }
        Ok(QSet::from_elements(self.inner.id, elements))
    }

    /// Registered qsets, in canonical order.
    pub fn registered(&self) -> &[QSet] {
        &self.inner.registry
    }

    /// Returns a universe with the same atoms and a registry extended by
    /// `qsets`. The receiver is left untouched.
    pub fn with_registered(
        &self,
        qsets: impl IntoIterator<Item = QSet>,
    ) -> Result<Universe, KernelError> {
        let mut all: BTreeSet<IdentityKey> = self
            .inner
            .registry
            .iter()
            .cloned()
            .map(|q| IdentityKey(Entity::QSet(q)))
            .collect();
        for q in qsets {
            if q.universe() != self.inner.id {
                return Err(KernelError::DomainMismatch);
            }
            all.insert(IdentityKey(Entity::QSet(q)));
        }
        let registry: Vec<QSet> = all
            .into_iter()
            .filter_map(|k| match k.0 {
                Entity::QSet(q) => Some(q),
                _ => None,
            })
            .collect();
        let mut registry_by_signature: BTreeMap<Signature, Vec<QSet>> = BTreeMap::new();
        for q in &registry {
            registry_by_signature
                .entry(q.signature().clone())
                .or_default()
                .push(q.clone());
        }
        Ok(Universe {
            inner: Arc::new(Inner {
                id: self.inner.id,
                kinds: self.inner.kinds.clone(),
                atoms_by_kind: self.inner.atoms_by_kind.clone(),
                macro_atoms: self.inner.macro_atoms.clone(),
                registry,
                registry_by_signature,
            }),
        })
    }

    /// Every entity of the universe in the ≡-class `class`, in canonical order.
    pub(crate) fn members_of_class(&self, class: &Class) -> Vec<Entity> {
        match class {
            Class::Micro(kind) => self.atoms_of_kind(kind).to_vec(),
            Class::Macro(name) => self
                .inner
                .macro_atoms
                .iter()
                .filter(|e| matches!(e, Entity::Macro(a) if a.name() == &**name))
                .cloned()
                .collect(),
            Class::QSet(sig) => self
                .inner
                .registry_by_signature
                .get(sig.as_ref())
                .map(|qs| qs.iter().cloned().map(Entity::QSet).collect())
                .unwrap_or_default(),
        }
    }

    pub(crate) fn owns(&self, e: &Entity) -> bool {
        e.universe() == self.inner.id
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Universe")
            .field("kinds", &self.inner.kinds)
            .field("M_atoms", &self.inner.macro_atoms)
            .field("registered", &self.inner.registry.len())
            .finish()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UniverseFile {
    #[serde(default)]
    kinds: KindList,
    #[serde(rename = "M_atoms", default)]
    macro_atoms: Vec<String>,
}

/// Kind map that keeps declaration order and rejects duplicate keys, which a
/// plain map would silently merge.
#[derive(Default)]
struct KindList(Vec<(String, u32)>);

impl<'de> Deserialize<'de> for KindList {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct KindVisitor;

        impl<'de> Visitor<'de> for KindVisitor {
            type Value = KindList;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from kind label to population")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<KindList, A::Error> {
                let mut out: Vec<(String, u32)> = Vec::new();
                while let Some((label, population)) = map.next_entry::<String, u32>()? {
                    if out.iter().any(|(l, _)| *l == label) {
                        return Err(serde::de::Error::custom(format!(
                            "duplicate kind label `{label}`"
                        )));
                    }
                    out.push((label, population));
                }
                Ok(KindList(out))
            }
        }

        deserializer.deserialize_map(KindVisitor)
    }
}
