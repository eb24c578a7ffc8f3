use std::ops::Range;

use rayon::prelude::*;

use crate::kernel::{indistinguishable, power_qset_bounded, Entity, QSet, Universe};

use super::{CheckError, CheckOptions, Fault, Predicate, Tally};

/// Urelement counts above this get a level one of small qsets only.
const FULL_LEVEL_ONE: usize = 12;

/// Fixed-width bitset over domain indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn count(&self) -> u64 {
        self.0.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub(crate) fn union(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }

    /// First index set in `self` but not in `other`.
    pub(crate) fn first_outside(&self, other: &Bits) -> Option<usize> {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .find(|(_, (a, b))| *a & !*b != 0)
            .map(|(w, (a, b))| w * 64 + (a & !b).trailing_zeros() as usize)
    }
}

/// The finite domain of quantification together with the ≡-matrix.
pub(crate) struct Ctx<'a> {
    pub(crate) opts: &'a CheckOptions,
    /// The input universe with every domain qset registered.
    pub(crate) universe: Universe,
    pub(crate) entities: Vec<Entity>,
    pub(crate) first_qset: usize,
    /// Row `i` holds every `j` with `entities[i] ≡ entities[j]`.
    pub(crate) indist: Vec<Bits>,
    pub(crate) predicates: Vec<Predicate>,
    /// The domain itself was truncated.
    pub(crate) bounded: bool,
}

/// Index combinations of `size` drawn from `0..limit`, each followed by
/// `last`, in lexicographic order.
fn combos_ending_at(limit: usize, size: usize, last: usize, out: &mut Vec<Vec<usize>>, cap: usize) {
    fn go(
        start: usize,
        limit: usize,
        left: usize,
        acc: &mut Vec<usize>,
        last: usize,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if left == 0 {
            let mut c = acc.clone();
            c.push(last);
            out.push(c);
            return;
        }
        for i in start..limit {
            acc.push(i);
            go(i + 1, limit, left - 1, acc, last, out, cap);
            acc.pop();
        }
    }
    go(0, limit, size, &mut Vec::new(), last, out, cap);
}

impl<'a> Ctx<'a> {
    pub(crate) fn build(u: &Universe, opts: &'a CheckOptions) -> Result<Ctx<'a>, CheckError> {
        let atoms = u.urelements();
        let mut bounded = false;

        let level_one: Vec<QSet> = if atoms.len() <= FULL_LEVEL_ONE {
            let all = u.qset(atoms.iter().cloned())?;
            power_qset_bounded(&all, FULL_LEVEL_ONE as u32)?
                .elements()
                .iter()
                .filter_map(|e| e.as_qset().cloned())
                .collect()
        } else {
            bounded = true;
            let mut combos = vec![Vec::new()];
            for size in 1..=opts.width.min(atoms.len()) {
                for last in size - 1..atoms.len() {
                    combos_ending_at(last, size - 1, last, &mut combos, opts.max_qsets);
                }
            }
            combos
                .into_iter()
                .map(|c| u.qset(c.into_iter().map(|i| atoms[i].clone())))
                .collect::<Result<_, _>>()?
        };

        let mut qsets = level_one;
        if qsets.len() > opts.max_qsets {
            qsets.truncate(opts.max_qsets);
            bounded = true;
        }
        let mut newest = 0..qsets.len();
        for _ in 1..opts.depth {
            let pool: Vec<Entity> = atoms
                .iter()
                .cloned()
                .chain(qsets.iter().cloned().map(Entity::QSet))
                .collect();
            let newest_in_pool = atoms.len() + newest.start..atoms.len() + newest.end;
            let room = opts.max_qsets.saturating_sub(qsets.len());
            let mut combos = Vec::new();
            for size in 1..=opts.width {
                for last in newest_in_pool.clone() {
                    combos_ending_at(last, size - 1, last, &mut combos, room + 1);
                }
            }
            if combos.len() > room {
                combos.truncate(room);
                bounded = true;
            }
            let start = qsets.len();
            for c in combos {
                qsets.push(u.qset(c.into_iter().map(|i| pool[i].clone()))?);
            }
            newest = start..qsets.len();
            if newest.is_empty() {
                break;
            }
        }

        let universe = u.with_registered(qsets.iter().cloned())?;
        let first_qset = atoms.len();
        let entities: Vec<Entity> = atoms
            .into_iter()
            .chain(qsets.into_iter().map(Entity::QSet))
            .collect();
        let n = entities.len();
        let indist = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = Bits::new(n);
                for j in 0..n {
                    if indistinguishable(&entities[i], &entities[j])? {
                        row.set(j);
                    }
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, CheckError>>()?;

        Ok(Ctx {
            opts,
            predicates: opts
                .predicates
                .clone()
                .unwrap_or_else(|| Predicate::default_suite(u)),
            universe,
            entities,
            first_qset,
            indist,
            bounded,
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.entities.len()
    }

    pub(crate) fn qset_range(&self) -> Range<usize> {
        self.first_qset..self.entities.len()
    }

    pub(crate) fn qset(&self, i: usize) -> Option<&QSet> {
        self.entities[i].as_qset()
    }

    pub(crate) fn equiv(&self, i: usize, j: usize) -> bool {
        self.indist[i].get(j)
    }

    /// `P(x)` honoring the power bound and any injected fault; `None` when
    /// `x` is over the bound.
    pub(crate) fn power(&self, x: &QSet) -> Result<Option<QSet>, CheckError> {
        if x.qc() > u64::from(self.opts.power_bound) {
            return Ok(None);
        }
        let p = power_qset_bounded(x, self.opts.power_bound)?;
        Ok(Some(match self.opts.fault {
            None => p,
            Some(Fault::PowerQsetUndercount) => {
                let whole = Entity::QSet(x.clone());

                crate::kernel::separate(&p, |t| {
                    !matches!(crate::kernel::extensionally_equal(t, &whole), Ok(true))
                })
            }
        }))
    }

    pub(crate) fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.iter().find(|p| p.name() == name)
    }

    /// Runs `f` for every index of `range` in parallel and merges the
    /// tallies in index order.
    pub(crate) fn par_tally<F>(&self, range: Range<usize>, f: F) -> Result<Tally, CheckError>
    where
        F: Fn(usize, &mut Tally) -> Result<(), CheckError> + Sync,
    {
        let parts = range
            .into_par_iter()
            .map(|i| {
                let mut t = Tally::default();
                f(i, &mut t)?;
                Ok(t)
            })
            .collect::<Result<Vec<_>, CheckError>>()?;
        let mut total = Tally::default();
        if self.bounded {
            total.mark_bounded();
        }
        for t in parts {
            total.merge(t);
        }
        Ok(total)
    }

    /// A fresh tally carrying the domain's bounded flag.
    pub(crate) fn tally(&self) -> Tally {
        let mut t = Tally::default();
        if self.bounded {
            t.mark_bounded();
        }
        t
    }
}
