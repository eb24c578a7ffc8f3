//! Theorem bodies. Any failure here points at a kernel bug rather than a
//! property of the model.

use rayon::prelude::*;

use crate::kernel::{
    extensionally_equal, indistinguishable, is_set, permutation_swap_check, strong_singleton,
    weak_singleton, Entity, QSet,
};
use crate::stats::{count_disjoint_covers, count_sum_covers};

use super::order::check_order_impossibility;
use super::{AxiomReport, CheckError, Ctx, Eval, Tally, Verdict};

pub(crate) const THEOREMS: [(&str, &str); 13] = [
    ("T1", "what is ≡ to an M-atom (qset) is an M-atom (qset)"),
    ("T2", "no order on a one-kind pure qset"),
    ("T3", "similar qsets of equal qc are ≡"),
    ("T4", "qsets with the same members are ≡"),
    ("T5", "[x] ≡ [y] iff x ≡ y and qc([x]) = qc([y])"),
    ("T6", "x =_E y implies x ≡ y"),
    ("T7", "every object has a strong singleton"),
    ("T8", "=_E is an equality"),
    ("T9", "permutations are unobservable"),
    ("L1", "#P(x) = 2^#x for finite sets"),
    ("ZF2", "disjoint ordered pair covers number 2^#x"),
    ("ZF3", "disjoint n-tuple covers number n^#x"),
    ("ZF4", "n-tuple covers with sizes summing to #x number n^#x"),
];

/// Largest set scanned by the cover theorems.
const COVER_LIMIT: u64 = 8;
/// Quasi-cardinals covered by the no-order scan.
const ORDER_RANGE: std::ops::RangeInclusive<u64> = 2..=5;

pub(crate) fn run_all(ctx: &Ctx) -> Result<Vec<AxiomReport>, CheckError> {
    THEOREMS
        .par_iter()
        .map(|&(id, title)| Ok(scan(ctx, id)?.into_report(id, title)))
        .collect()
}

fn arg(w: &[Entity], i: usize) -> Result<&Entity, CheckError> {
    w.get(i)
        .ok_or_else(|| CheckError::Precondition(format!("witness has no position {i}")))
}

fn qset_of(w: &[Entity], i: usize) -> Result<&QSet, CheckError> {
    arg(w, i)?
        .as_qset()
        .ok_or_else(|| CheckError::Precondition(format!("witness position {i} is not a qset")))
}

fn indist(a: &Entity, b: &Entity) -> Result<bool, CheckError> {
    Ok(indistinguishable(a, b)?)
}

fn ext_eq(a: &Entity, b: &Entity) -> Result<bool, CheckError> {
    Ok(extensionally_equal(a, b)?)
}

fn member(t: &Entity, y: &Entity) -> bool {
    y.as_qset().is_some_and(|q| q.contains(t))
}

fn one_kind_pure(x: &QSet) -> bool {
    x.is_pure() && x.signature().classes().count() <= 1
}

fn boxes(context: Option<&str>) -> Result<u64, CheckError> {
    context
        .and_then(|c| c.strip_prefix("n="))
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| {
            CheckError::Precondition("cover witness needs an `n=<boxes>` context".into())
        })
}

fn power_of(n: u64, exp: u64) -> Option<u64> {
    n.checked_pow(u32::try_from(exp).ok()?)
}

pub(crate) fn body(
    ctx: &Ctx,
    id: &str,
    w: &[Entity],
    context: Option<&str>,
) -> Result<Eval, CheckError> {
    Ok(match id {
        "T1" => {
            let (x, y) = (arg(w, 0)?, arg(w, 1)?);
            if x.is_micro() || !indist(x, y)? {
                Eval::Inapplicable
            } else {
                Eval::from_bool(x.is_macro() == y.is_macro() && x.is_qset() == y.is_qset())
            }
        }
        "T2" => {
            let x = qset_of(w, 0)?;
            if one_kind_pure(x) && ORDER_RANGE.contains(&x.qc()) {
                Eval::from_bool(check_order_impossibility(x)?.verdict == Verdict::Holds)
            } else {
                Eval::Inapplicable
            }
        }
        "T3" => {
            let (x, y) = (qset_of(w, 0)?, qset_of(w, 1)?);
            let mut similar = true;
            'outer: for z in x.elements() {
                for t in y.elements() {
                    if !indist(z, t)? {
                        similar = false;
                        break 'outer;
                    }
                }
            }
            if similar && x.qc() == y.qc() {
                Eval::from_bool(indist(arg(w, 0)?, arg(w, 1)?)?)
            } else {
                Eval::Inapplicable
            }
        }
        "T4" => {
            let (x, y) = (qset_of(w, 0)?, qset_of(w, 1)?);
            if x.is_subset(y) && y.is_subset(x) {
                Eval::from_bool(indist(arg(w, 0)?, arg(w, 1)?)?)
            } else {
                Eval::Inapplicable
            }
        }
        "T5" => {
            let (x, y) = (arg(w, 0)?, arg(w, 1)?);
            let wx = weak_singleton(&ctx.universe, x)?;
            let wy = weak_singleton(&ctx.universe, y)?;
            let left = indist(&Entity::QSet(wx.clone()), &Entity::QSet(wy.clone()))?;
            let right = indist(x, y)? && wx.qc() == wy.qc();
            Eval::from_bool(left == right)
        }
        "T6" => {
            let (x, y) = (arg(w, 0)?, arg(w, 1)?);
            if x.is_micro() || y.is_micro() || !ext_eq(x, y)? {
                Eval::Inapplicable
            } else {
                Eval::from_bool(indist(x, y)?)
            }
        }
        "T7" => {
            let x = arg(w, 0)?;
            let s = strong_singleton(&ctx.universe, x)?;
            let weak = weak_singleton(&ctx.universe, x)?;
            Eval::from_bool(s.is_subset(&weak) && s.qc() == 1)
        }
        "T8" => {
            if w.iter().any(Entity::is_micro) {
                return Ok(Eval::Inapplicable);
            }
            match w.len() {
                1 => Eval::from_bool(ext_eq(&w[0], &w[0])?),
                2 => {
                    let (x, y) = (&w[0], &w[1]);
                    if !ext_eq(x, y)? {
                        Eval::Inapplicable
                    } else {
                        let symmetric = ext_eq(y, x)?;
                        let substitutive =
                            ctx.entities.iter().all(|t| member(x, t) == member(y, t));
                        Eval::from_bool(symmetric && substitutive)
                    }
                }
                3 => {
                    let (x, y, z) = (&w[0], &w[1], &w[2]);
                    if ext_eq(x, y)? && ext_eq(y, z)? {
                        Eval::from_bool(ext_eq(x, z)?)
                    } else {
                        Eval::Inapplicable
                    }
                }
                _ => {
                    return Err(CheckError::Precondition(
                        "T8 witness has 1 to 3 entries".into(),
                    ))
                }
            }
        }
        "T9" => {
            let (x, z, v) = (qset_of(w, 0)?, arg(w, 1)?, arg(w, 2)?);
            if z.is_micro() && x.contains(z) && indist(z, v)? {
                Eval::from_bool(permutation_swap_check(&ctx.universe, x, z, v)?)
            } else {
                Eval::Inapplicable
            }
        }
        "L1" => {
            let x = arg(w, 0)?;
            let xq = qset_of(w, 0)?;
            if !is_set(x) {
                Eval::Inapplicable
            } else {
                match ctx.power(xq)? {
                    None => Eval::Inapplicable,
                    Some(p) => Eval::from_bool(Some(p.qc()) == power_of(2, xq.qc())),
                }
            }
        }
        "ZF2" | "ZF3" | "ZF4" => {
            let x = arg(w, 0)?;
            let xq = qset_of(w, 0)?;
            let n = if id == "ZF2" { 2 } else { boxes(context)? };
            let applies = is_set(x) && xq.qc() <= COVER_LIMIT && !(id == "ZF2" && xq.is_empty());
            if !applies {
                Eval::Inapplicable
            } else {
                let count = if id == "ZF4" {
                    count_sum_covers(xq, n)?
                } else {
                    count_disjoint_covers(xq, n)?
                };
                Eval::from_bool(Some(count) == power_of(n, xq.qc()))
            }
        }
        other => return Err(CheckError::UnknownId(other.to_string())),
    })
}

fn scan(ctx: &Ctx, id: &'static str) -> Result<Tally, CheckError> {
    let n = ctx.len();
    let all = 0..n;
    let qsets = ctx.qset_range();
    let e = |i: usize| ctx.entities[i].clone();

    let unary = |range: std::ops::Range<usize>, context: Option<&str>| {
        ctx.par_tally(range, |i, t| {
            let w = [e(i)];
            t.record_in(body(ctx, id, &w, context)?, context, || w.to_vec());
            Ok(())
        })
    };
    let binary = |outer: std::ops::Range<usize>, inner: std::ops::Range<usize>| {
        ctx.par_tally(outer, |i, t| {
            for j in inner.clone() {
                let w = [e(i), e(j)];
                t.record(body(ctx, id, &w, None)?, || w.to_vec());
            }
            Ok(())
        })
    };

    match id {
        "T1" => ctx.par_tally(all, |i, t| {
            for j in ctx.indist[i].ones() {
                let w = [e(i), e(j)];
                t.record(body(ctx, id, &w, None)?, || w.to_vec());
            }
            Ok(())
        }),
        "T2" | "T7" | "L1" | "ZF2" => unary(if id == "T7" { all } else { qsets }, None),
        "T3" | "T6" => binary(
            if id == "T3" {
                qsets.clone()
            } else {
                all.clone()
            },
            if id == "T3" { qsets } else { all },
        ),
        "T4" => {
            let mut t = binary(qsets.clone(), qsets.clone())?;
            // the same members assembled a second time, in reverse order
            for i in qsets {
                let x = ctx.qset(i).expect("qset range");
                let copy = ctx.universe.qset(x.elements().iter().rev().cloned())?;
                let w = [e(i), Entity::QSet(copy)];
                t.record(body(ctx, id, &w, None)?, || w.to_vec());
            }
            Ok(t)
        }
        "T5" => {
            let weak: Vec<QSet> = ctx
                .entities
                .par_iter()
                .map(|x| weak_singleton(&ctx.universe, x))
                .collect::<Result<_, _>>()?;
            let weak_e: Vec<Entity> = weak.iter().cloned().map(Entity::QSet).collect();
            ctx.par_tally(all.clone(), |i, t| {
                for j in all.clone() {
                    let left = indist(&weak_e[i], &weak_e[j])?;
                    let right = ctx.equiv(i, j) && weak[i].qc() == weak[j].qc();
                    let eval = if left == right {
                        Eval::Holds
                    } else {
                        body(ctx, id, &[e(i), e(j)], None)?
                    };
                    t.record(eval, || vec![e(i), e(j)]);
                }
                Ok(())
            })
        }
        "T8" => {
            let classical: Vec<usize> = all.filter(|&i| !ctx.entities[i].is_micro()).collect();
            let partners: Vec<Vec<usize>> = classical
                .par_iter()
                .map(|&i| {
                    let mut row = Vec::new();
                    for &j in &classical {
                        if ext_eq(&ctx.entities[i], &ctx.entities[j])? {
                            row.push(j);
                        }
                    }
                    Ok(row)
                })
                .collect::<Result<_, CheckError>>()?;
            let mut t = ctx.tally();
            for (a, &i) in classical.iter().enumerate() {
                let w = [e(i)];
                t.record(body(ctx, id, &w, None)?, || w.to_vec());
                for &j in &partners[a] {
                    let w = [e(i), e(j)];
                    t.record(body(ctx, id, &w, None)?, || w.to_vec());
                    let b = classical.binary_search(&j).expect("classical index");
                    for &k in &partners[b] {
                        let w = [e(i), e(j), e(k)];
                        t.record(body(ctx, id, &w, None)?, || w.to_vec());
                    }
                }
                t.add_bulk((classical.len() - partners[a].len()) as u64, 0);
            }
            Ok(t)
        }
        "T9" => ctx.par_tally(qsets, |i, t| {
            let x = ctx.qset(i).expect("qset range");
            for z in x.elements().iter().filter(|z| z.is_micro()) {
                let kind = z.kind().expect("m-atom").label().to_string();
                for v in ctx.universe.atoms_of(&kind) {
                    let w = [e(i), z.clone(), v.clone()];
                    t.record(body(ctx, id, &w, None)?, || w.to_vec());
                }
            }
            Ok(())
        }),
        "ZF3" | "ZF4" => {
            let mut t = ctx.tally();
            for n in 1..=ctx.opts.max_boxes {
                let name = format!("n={n}");
                t.merge(unary(qsets.clone(), Some(&name))?);
            }
            Ok(t)
        }
        other => Err(CheckError::UnknownId(other.to_string())),
    }
}
