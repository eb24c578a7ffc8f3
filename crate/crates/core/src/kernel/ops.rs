use std::cmp::Ordering;

use super::entity::{identity_cmp, Entity, QSet};
use super::signature::Class;
use super::universe::Universe;
use super::KernelError;

/// Largest quasi-cardinal whose power-qset is materialized by default.
pub const DEFAULT_POWER_BOUND: u32 = 20;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CombineMode {
    Union,
    Intersection,
    Difference,
}

fn same_universe(a: &Entity, b: &Entity) -> Result<(), KernelError> {
    if a.universe() == b.universe() {
        Ok(())
    } else {
        Err(KernelError::DomainMismatch)
    }
}

/// `a ≡ b`.
///
/// m-atoms are indistinguishable iff they share a kind, M-atoms iff they are
/// the same atom, qsets iff their signatures agree. Entities of different
/// sorts are never indistinguishable.
pub fn indistinguishable(a: &Entity, b: &Entity) -> Result<bool, KernelError> {
    same_universe(a, b)?;
    Ok(match (a, b) {
        (Entity::Micro(x), Entity::Micro(y)) => x.kind() == y.kind(),
        (Entity::Macro(x), Entity::Macro(y)) => x.name() == y.name(),
        (Entity::QSet(x), Entity::QSet(y)) => x.signature() == y.signature(),
        _ => false,
    })
}

/// `x =_E y`. Not a formula when either side is an m-atom.
pub fn extensionally_equal(x: &Entity, y: &Entity) -> Result<bool, KernelError> {
    if x.is_micro() || y.is_micro() {
        return Err(KernelError::IllFormed(
            "identity is not defined for m-atoms".into(),
        ));
    }
    same_universe(x, y)?;
    Ok(match (x, y) {
        (Entity::Macro(a), Entity::Macro(b)) => a.name() == b.name(),
        (Entity::QSet(a), Entity::QSet(b)) => a.same_identity(b),
        _ => false,
    })
}

/// Atoms have quasi-cardinal zero; a qset counts its elements.
pub fn quasi_cardinal(e: &Entity) -> u64 {
    match e {
        Entity::QSet(q) => q.qc(),
        _ => 0,
    }
}

/// `Z(e)`: a qset whose transitive closure has no m-atoms.
pub fn is_set(e: &Entity) -> bool {
    e.is_qset() && !e.micro_in_closure()
}

/// `[x, y]`: everything in `u` indistinguishable from `x` or from `y`.
///
/// Qsets range over the universe's registry plus `x` and `y` themselves.
pub fn weak_pair(u: &Universe, x: &Entity, y: &Entity) -> Result<QSet, KernelError> {
    if !u.owns(x) || !u.owns(y) {
        return Err(KernelError::DomainMismatch);
    }
    let mut elements = u.members_of_class(&x.class());
    let class_y = y.class();
    if class_y != x.class() {
        elements.extend(u.members_of_class(&class_y));
    }
    for e in [x, y] {
        if e.is_qset() {
            elements.push(e.clone());
        }
    }
    Ok(QSet::from_elements(u.id(), elements))
}

/// `[x]`
pub fn weak_singleton(u: &Universe, x: &Entity) -> Result<QSet, KernelError> {
    weak_pair(u, x, x)
}

/// A sub-qset of `[x]` with quasi-cardinal one. The representative is the
/// canonical first element of `[x]`.
pub fn strong_singleton(u: &Universe, x: &Entity) -> Result<QSet, KernelError> {
    let weak = weak_singleton(u, x)?;
    let first = weak.elements()[0].clone();
    Ok(QSet::from_sorted(u.id(), vec![first]))
}

/// Element-level union, intersection or difference.
pub fn combine(x: &QSet, y: &QSet, mode: CombineMode) -> Result<QSet, KernelError> {
    if x.universe() != y.universe() {
        return Err(KernelError::DomainMismatch);
    }
    let (a, b) = (x.elements(), y.elements());
    let mut out = Vec::with_capacity(match mode {
        CombineMode::Union => a.len() + b.len(),
        _ => a.len(),
    });
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match identity_cmp(&a[i], &b[j]) {
            Ordering::Less => {
                if mode != CombineMode::Intersection {
                    out.push(a[i].clone());
                }
                i += 1;
            }
            Ordering::Greater => {
                if mode == CombineMode::Union {
                    out.push(b[j].clone());
                }
                j += 1;
            }
            Ordering::Equal => {
                if mode != CombineMode::Difference {
                    out.push(a[i].clone());
                }
                i += 1;
                j += 1;
            }
        }
    }
    if mode != CombineMode::Intersection {
        out.extend(a[i..].iter().cloned());
    }
    if mode == CombineMode::Union {
        out.extend(b[j..].iter().cloned());
    }
    Ok(QSet::from_sorted(x.universe(), out))
}

pub fn union(x: &QSet, y: &QSet) -> Result<QSet, KernelError> {
    combine(x, y, CombineMode::Union)
}

pub fn intersection(x: &QSet, y: &QSet) -> Result<QSet, KernelError> {
    combine(x, y, CombineMode::Intersection)
}

pub fn difference(x: &QSet, y: &QSet) -> Result<QSet, KernelError> {
    combine(x, y, CombineMode::Difference)
}

/// `P(x)` with the default capacity bound.
pub fn power_qset(x: &QSet) -> Result<QSet, KernelError> {
    power_qset_bounded(x, DEFAULT_POWER_BOUND)
}

/// Every sub-qset of `x`, formed over element identities, so the result
/// always has `2^qc(x)` members even when many of them are indistinguishable.
pub fn power_qset_bounded(x: &QSet, bound: u32) -> Result<QSet, KernelError> {
    let n = x.qc();
    if n > u64::from(bound) || n >= 63 {
        return Err(KernelError::Capacity {
            what: "power-qset",
            needed: n,
            bound: u64::from(bound),
        });
    }
    let elements = x.elements();
    let subsets = (0u64..1 << n)
        .map(|mask| {
            let picked = elements
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e.clone())
                .collect();
            Entity::QSet(QSet::from_sorted(x.universe(), picked))
        })
        .collect();
    Ok(QSet::from_elements(x.universe(), subsets))
}

/// `x/≡`: one entry per class among the elements, with its size.
pub fn quotient_by_indist(x: &QSet) -> Vec<(Class, u64)> {
    let mut classes: Vec<(Class, u64)> = Vec::new();
    for e in x.elements() {
        let c = e.class();
        match classes.iter_mut().find(|(k, _)| *k == c) {
            Some((_, n)) => *n += 1,
            None => classes.push((c, 1)),
        }
    }
    classes.sort_by(|a, b| a.0.cmp(&b.0));
    classes
}

/// `[t ∈ x : A(t)]`. The predicate sees entities through the public API
/// only, so it cannot tell indistinguishable m-atoms apart.
pub fn separate(x: &QSet, predicate: impl Fn(&Entity) -> bool) -> QSet {
    let kept = x
        .elements()
        .iter()
        .filter(|e| predicate(e))
        .cloned()
        .collect();
    QSet::from_sorted(x.universe(), kept)
}

/// Swaps an m-atom `z ∈ x` for an indistinguishable `w` and reports whether
/// the result is indistinguishable from `x`.
///
/// `z'` is `{z}`. `w'` is `{w}` unless `w` already sits in `x − z'`, in which
/// case the canonical first atom of `[w]` outside `x − z'` is used.
pub fn permutation_swap_check(
    u: &Universe,
    x: &QSet,
    z: &Entity,
    w: &Entity,
) -> Result<bool, KernelError> {
    if !u.owns(z) || !u.owns(w) || x.universe() != u.id() {
        return Err(KernelError::DomainMismatch);
    }
    if !z.is_micro() {
        return Err(KernelError::Precondition("z must be an m-atom".into()));
    }
    if !x.contains(z) {
        return Err(KernelError::Precondition(
            "z must be an element of x".into(),
        ));
    }
    if !indistinguishable(z, w)? {
        return Err(KernelError::Precondition(
            "w must be indistinguishable from z".into(),
        ));
    }
    let z_strong = QSet::from_sorted(u.id(), vec![z.clone()]);
    let rest = difference(x, &z_strong)?;
    let w_rep = if rest.contains(w) {
        weak_singleton(u, w)?
            .elements()
            .iter()
            .find(|t| !rest.contains(t))
            .cloned()
            .ok_or_else(|| KernelError::Precondition("no free representative for w".into()))?
    } else {
        w.clone()
    };
    let w_strong = QSet::from_sorted(u.id(), vec![w_rep]);
    let swapped = union(&rest, &w_strong)?;
    indistinguishable(&Entity::QSet(swapped), &Entity::QSet(x.clone()))
}
