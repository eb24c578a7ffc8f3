use std::fmt;

use super::entity::{identity_cmp, Entity, QSet};
use super::ops::{indistinguishable, separate};
use super::KernelError;

/// A finite collection of ordered pairs. Pairs are positional; the
/// `[[x],[x,y]]` encoding is not used.
#[derive(Clone, Debug, Default)]
pub struct QRelation {
    pairs: Vec<(Entity, Entity)>,
}

impl QRelation {
    pub fn new(pairs: impl IntoIterator<Item = (Entity, Entity)>) -> Self {
        let mut pairs: Vec<(Entity, Entity)> = pairs.into_iter().collect();
        pairs.sort_by(|a, b| identity_cmp(&a.0, &b.0).then_with(|| identity_cmp(&a.1, &b.1)));
        pairs.dedup_by(|a, b| identity_cmp(&a.0, &b.0).is_eq() && identity_cmp(&a.1, &b.1).is_eq());
        QRelation { pairs }
    }

    pub fn pairs(&self) -> &[(Entity, Entity)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `Dom(f) = [u ∈ x : ⟨u, v⟩ ∈ f]`
    pub fn domain(&self, x: &QSet) -> QSet {
        separate(x, |u| {
            self.pairs.iter().any(|(a, _)| identity_cmp(a, u).is_eq())
        })
    }

    /// `Rang(f) = [v ∈ y : ⟨u, v⟩ ∈ f]`
    pub fn range(&self, y: &QSet) -> QSet {
        separate(y, |v| {
            self.pairs.iter().any(|(_, b)| identity_cmp(b, v).is_eq())
        })
    }
}

/// Strongest classification of a relation from `x` to `y`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QRelationClass {
    NotARelation,
    Relation,
    QFunction,
    QInjection,
    QSurjection,
    QBijection,
}

impl fmt::Display for QRelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QRelationClass::NotARelation => "not-a-relation",
            QRelationClass::Relation => "relation",
            QRelationClass::QFunction => "q-function",
            QRelationClass::QInjection => "q-injection",
            QRelationClass::QSurjection => "q-surjection",
            QRelationClass::QBijection => "q-bijection",
        })
    }
}

fn all_pairs_respect(
    pairs: &[(Entity, Entity)],
    premise: impl Fn(&(Entity, Entity), &(Entity, Entity)) -> Result<bool, KernelError>,
    conclusion: impl Fn(&(Entity, Entity), &(Entity, Entity)) -> Result<bool, KernelError>,
) -> Result<bool, KernelError> {
    for p in pairs {
        for q in pairs {
            if premise(p, q)? && !conclusion(p, q)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Classifies `f` as a relation, q-function, q-injection, q-surjection or
/// q-bijection from `x` to `y`, including the quasi-cardinal side conditions.
pub fn classify_q_relation(
    f: &QRelation,
    x: &QSet,
    y: &QSet,
) -> Result<QRelationClass, KernelError> {
    if x.universe() != y.universe() {
        return Err(KernelError::DomainMismatch);
    }
    for (u, v) in f.pairs() {
        if u.universe() != x.universe() || v.universe() != x.universe() {
            return Err(KernelError::DomainMismatch);
        }
    }
    let pairs = f.pairs();
    if !pairs.iter().all(|(u, v)| x.contains(u) && y.contains(v)) {
        return Ok(QRelationClass::NotARelation);
    }

    let total = x
        .elements()
        .iter()
        .all(|u| pairs.iter().any(|(a, _)| identity_cmp(a, u).is_eq()));
    let maps_indist = all_pairs_respect(
        pairs,
        |p, q| indistinguishable(&p.0, &q.0),
        |p, q| indistinguishable(&p.1, &q.1),
    )?;
    if !(total && maps_indist) {
        return Ok(QRelationClass::Relation);
    }

    let dom_qc = f.domain(x).qc();
    let rng_qc = f.range(y).qc();
    let injective = dom_qc <= rng_qc
        && all_pairs_respect(
            pairs,
            |p, q| indistinguishable(&p.1, &q.1),
            |p, q| indistinguishable(&p.0, &q.0),
        )?;
    let onto = y
        .elements()
        .iter()
        .all(|v| pairs.iter().any(|(_, b)| identity_cmp(b, v).is_eq()));
    let surjective = onto && dom_qc >= rng_qc;

    Ok(match (injective, surjective) {
        (true, true) => QRelationClass::QBijection,
        (true, false) => QRelationClass::QInjection,
        (false, true) => QRelationClass::QSurjection,
        (false, false) => QRelationClass::QFunction,
    })
}
