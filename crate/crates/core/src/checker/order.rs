use crate::kernel::{indistinguishable, Entity, QSet};

use super::{CheckError, Verdict};

/// Largest quasi-cardinal scanned over every binary relation; above it only
/// unions of class products are generated.
const EXHAUSTIVE_LIMIT: usize = 5;
const MAX_CLASSES: usize = 5;

/// Result of the no-order scan on one qset.
#[derive(Clone, Debug)]
pub struct OrderCheck {
    pub verdict: Verdict,
    /// A non-empty ≡-invariant relation with no pair of ≡ elements.
    pub witness: Option<Vec<(Entity, Entity)>>,
    pub relations_scanned: u64,
    pub invariant_relations: u64,
}

/// Checks that no non-empty ≡-invariant relation on the elements of `x`
/// avoids relating two indistinguishable elements, so none can be a strict
/// order under irreflexivity up to ≡.
///
/// For `qc(x) <= 5` every one of the `2^(qc²)` relations is scanned and the
/// invariant ones are kept; beyond that the invariant relations are
/// generated directly as unions of products of ≡-classes.
pub fn check_order_impossibility(x: &QSet) -> Result<OrderCheck, CheckError> {
    let elements = x.elements();
    if !x.is_pure() {
        return Err(CheckError::Precondition("x must be a pure qset".into()));
    }
    let q = elements.len();
    let mut class_of = vec![usize::MAX; q];
    let mut classes = 0;
    for i in 0..q {
        if class_of[i] != usize::MAX {
            continue;
        }
        for j in i..q {
            if class_of[j] == usize::MAX && indistinguishable(&elements[i], &elements[j])? {
                class_of[j] = classes;
            }
        }
        classes += 1;
    }
    if classes > 1 {
        return Err(CheckError::Precondition(
            "x must contain indistinguishable elements only".into(),
        ));
    }
    if q == 0 {
        return Ok(OrderCheck {
            verdict: Verdict::Vacuous,
            witness: None,
            relations_scanned: 0,
            invariant_relations: 0,
        });
    }

    let relation = |pairs: &mut dyn Iterator<Item = (usize, usize)>| -> Vec<(Entity, Entity)> {
        pairs
            .map(|(i, j)| (elements[i].clone(), elements[j].clone()))
            .collect()
    };

    if q <= EXHAUSTIVE_LIMIT {
        let bits = q * q;
        let bit = |i: usize, j: usize| 1u32 << (i * q + j);
        let mut blocks = vec![0u32; classes * classes];
        let mut equiv_pairs = 0u32;
        for i in 0..q {
            for j in 0..q {
                blocks[class_of[i] * classes + class_of[j]] |= bit(i, j);
                if class_of[i] == class_of[j] {
                    equiv_pairs |= bit(i, j);
                }
            }
        }
        let mut invariant = 0u64;
        let mut witness = None;
        for mask in 0u32..(1u32 << bits) {
            if !blocks.iter().all(|&b| mask & b == 0 || mask & b == b) {
                continue;
            }
            invariant += 1;
            if mask != 0 && mask & equiv_pairs == 0 && witness.is_none() {
                let mut pairs = (0..q)
                    .flat_map(|i| (0..q).map(move |j| (i, j)))
                    .filter(|&(i, j)| mask & bit(i, j) != 0);
                witness = Some(relation(&mut pairs));
            }
        }
        return Ok(OrderCheck {
            verdict: if witness.is_some() {
                Verdict::Fails
            } else {
                Verdict::Holds
            },
            witness,
            relations_scanned: 1u64 << bits,
            invariant_relations: invariant,
        });
    }

    if classes > MAX_CLASSES {
        return Err(CheckError::Precondition(format!(
            "too many ≡-classes ({classes}) for the relation scan"
        )));
    }
    let products = classes * classes;
    let mut witness = None;
    for selection in 1u32..(1u32 << products) {
        let diagonal = (0..classes).any(|c| selection >> (c * classes + c) & 1 == 1);
        if !diagonal && witness.is_none() {
            let mut pairs = (0..q)
                .flat_map(|i| (0..q).map(move |j| (i, j)))
                .filter(|&(i, j)| selection >> (class_of[i] * classes + class_of[j]) & 1 == 1);
            witness = Some(relation(&mut pairs));
        }
    }
    let count = 1u64 << products;
    Ok(OrderCheck {
        verdict: if witness.is_some() {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        witness,
        relations_scanned: count,
        invariant_relations: count,
    })
}
