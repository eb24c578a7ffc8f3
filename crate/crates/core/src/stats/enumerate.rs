//! Streams of distributions and the counts that materialize them.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::kernel::{power_qset, Entity, QSet};

use super::counting::count_distributions;
use super::occupancy::{Compositions, DistributionTuple, OccupancyVector};
use super::{StatModel, StatsError};

/// Default bound on materialized tuples.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Every assignment of the elements of a pure qset to `n` boxes, as
/// base-`n` words over the canonical element order, lexicographically.
#[derive(Clone, Debug)]
pub struct MbTuples {
    base: QSet,
    boxes: usize,
    word: Option<Vec<usize>>,
}

impl MbTuples {
    fn new(base: QSet, boxes: usize) -> Self {
        let word = Some(vec![0; base.elements().len()]);
        MbTuples { base, boxes, word }
    }

    fn build(&self, word: &[usize]) -> DistributionTuple {
        let mut parts: Vec<Vec<Entity>> = vec![Vec::new(); self.boxes];
        for (e, &b) in self.base.elements().iter().zip(word) {
            parts[b].push(e.clone());
        }
        let universe = self.base.universe();
        DistributionTuple::new(
            parts
                .into_iter()
                .map(|p| QSet::from_sorted(universe, p))
                .collect(),
        )
    }
}

impl Iterator for MbTuples {
    type Item = DistributionTuple;

    fn next(&mut self) -> Option<DistributionTuple> {
        let word = self.word.as_mut()?;
        let out = word.clone();
        let mut i = word.len();
        loop {
            if i == 0 {
                self.word = None;
                break;
            }
            i -= 1;
            word[i] += 1;
            if word[i] < self.boxes {
                break;
            }
            word[i] = 0;
        }
        Some(self.build(&out))
    }
}

/// One item of a distribution stream.
#[derive(Clone, Debug)]
pub enum Distribution {
    Tuple(DistributionTuple),
    Occupancy(OccupancyVector),
}

impl Distribution {
    pub fn occupancy(&self) -> OccupancyVector {
        match self {
            Distribution::Tuple(t) => t.occupancy(),
            Distribution::Occupancy(v) => v.clone(),
        }
    }
}

/// MB yields labeled tuples; BE and FD yield occupancy vectors.
#[derive(Clone, Debug)]
pub enum Distributions {
    Mb(MbTuples),
    Occupancies(Compositions),
}

impl Iterator for Distributions {
    type Item = Distribution;

    fn next(&mut self) -> Option<Distribution> {
        match self {
            Distributions::Mb(t) => t.next().map(Distribution::Tuple),
            Distributions::Occupancies(c) => c.next().map(Distribution::Occupancy),
        }
    }
}

fn require_pure(x: &QSet) -> Result<(), StatsError> {
    if x.is_pure() {
        Ok(())
    } else {
        Err(StatsError::Unsupported(
            "distributions are defined for pure qsets only".into(),
        ))
    }
}

fn box_count(n: u64) -> Result<usize, StatsError> {
    if n == 0 {
        return Err(StatsError::InvalidArgument(
            "at least one box is required".into(),
        ));
    }
    usize::try_from(n).map_err(|_| StatsError::InvalidArgument("too many boxes".into()))
}

fn check_capacity(count: &BigUint, cap: u64, what: &'static str) -> Result<(), StatsError> {
    match count.to_u64() {
        Some(c) if c <= cap => Ok(()),
        _ => Err(StatsError::Capacity {
            what,
            needed: count.to_string(),
            bound: cap,
        }),
    }
}

/// Streams the distributions of the elements of `x` over `n` boxes.
///
/// MB stops at `cap` tuples: beyond it a capacity error is returned and the
/// exact count is still available from [`count_distributions`].
pub fn enumerate_distributions(
    x: &QSet,
    n: u64,
    model: StatModel,
    cap: u64,
) -> Result<Distributions, StatsError> {
    require_pure(x)?;
    let boxes = box_count(n)?;
    let particles = x.qc();
    Ok(match model {
        StatModel::MB => {
            check_capacity(&count_distributions(particles, n, model)?, cap, "MB tuples")?;
            Distributions::Mb(MbTuples::new(x.clone(), boxes))
        }
        StatModel::BE => Distributions::Occupancies(Compositions::new(particles, boxes)),
        StatModel::FD => {
            Distributions::Occupancies(Compositions::new(particles, boxes).with_max_part(1))
        }
    })
}

/// Outcome of materializing `z_n` for a pure qset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q26Check {
    pub boxes: u64,
    pub quasi_cardinal: u64,
    /// Distinct tuples found that meet every side condition.
    pub enumerated: u64,
    /// `n^qc(x)`
    pub expected: BigUint,
    pub holds: bool,
}

/// Materializes `z_n`, the tuples `⟨y_1, …, y_n⟩` with `y_i ∈ P(x)`,
/// `⋃ y_i = x` and `Σ qc(y_i) = qc(x)`, and compares its size with `n^qc(x)`.
pub fn q26prime_check(x: &QSet, n: u64, cap: u64) -> Result<Q26Check, StatsError> {
    require_pure(x)?;
    let power = power_qset(x)?;
    q26prime_check_against(x, n, &power, cap)
}

/// As [`q26prime_check`] with a caller-supplied power-qset, used to test
/// that a corrupted `P(x)` is caught.
pub fn q26prime_check_against(
    x: &QSet,
    n: u64,
    power: &QSet,
    cap: u64,
) -> Result<Q26Check, StatsError> {
    require_pure(x)?;
    let expected = count_distributions(x.qc(), n, StatModel::MB)?;
    let tuples = match enumerate_distributions(x, n, StatModel::MB, cap)? {
        Distributions::Mb(t) => t,
        Distributions::Occupancies(_) => unreachable!("MB streams tuples"),
    };

    let full = x.elements().len();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for tuple in tuples {
        let mut key = Vec::with_capacity(tuple.boxes().len());
        let mut covered = vec![false; full];
        let mut qc_sum = 0u64;
        let mut admissible = true;
        for y in tuple.boxes() {
            if !power.contains(&Entity::QSet(y.clone())) {
                admissible = false;
                break;
            }
            qc_sum += y.qc();
            let mut mask = 0u64;
            for e in y.elements() {
                match x.position(e) {
                    Some(p) => {
                        covered[p] = true;
                        mask |= 1 << p;
                    }
                    None => admissible = false,
                }
            }
            key.push(mask);
        }
        if admissible && qc_sum == x.qc() && covered.iter().all(|&c| c) {
            seen.insert(key);
        }
    }
    let enumerated = seen.len() as u64;
    Ok(Q26Check {
        boxes: n,
        quasi_cardinal: x.qc(),
        holds: BigUint::from(enumerated) == expected,
        enumerated,
        expected,
    })
}

/// Masks of the members of `P(x)` over the element positions of `x`.
fn power_masks(x: &QSet) -> Result<Vec<u64>, StatsError> {
    let power = power_qset(x)?;
    Ok(power
        .elements()
        .iter()
        .map(|y| {
            y.members()
                .iter()
                .map(|e| 1u64 << x.position(e).expect("sub-qset of x"))
                .fold(0, |acc, bit| acc | bit)
        })
        .collect())
}

/// Counts ordered `n`-tuples of members of `P(x)` that are pairwise disjoint
/// and cover `x`, by scanning `P(x)` at every position.
pub fn count_disjoint_covers(x: &QSet, n: u64) -> Result<u64, StatsError> {
    box_count(n)?;
    let masks = power_masks(x)?;
    let full = (1u64 << x.elements().len()) - 1;

    fn go(masks: &[u64], full: u64, used: u64, left: u64) -> u64 {
        if left == 0 {
            return u64::from(used == full);
        }
        masks
            .iter()
            .filter(|&&m| m & used == 0)
            .map(|&m| go(masks, full, used | m, left - 1))
            .sum()
    }
    Ok(go(&masks, full, 0, n))
}

/// Counts ordered `n`-tuples of members of `P(x)` whose union is `x` and
/// whose quasi-cardinals sum to `qc(x)`; disjointness is not imposed.
pub fn count_sum_covers(x: &QSet, n: u64) -> Result<u64, StatsError> {
    box_count(n)?;
    let mut masks = power_masks(x)?;
    masks.sort_by_key(|m| m.count_ones());
    let size = x.elements().len() as u32;
    let full = (1u64 << size) - 1;

    fn go(masks: &[u64], full: u64, union: u64, budget: u32, left: u64) -> u64 {
        if left == 0 {
            return u64::from(union == full && budget == 0);
        }
        let mut total = 0;
        for &m in masks {
            let c = m.count_ones();
            if c > budget {
                break;
            }
            if left == 1 && c != budget {
                continue;
            }
            total += go(masks, full, union | m, budget - c, left - 1);
        }
        total
    }
    Ok(go(&masks, full, 0, size, n))
}
