//! Axiom bodies and the scans that instantiate them over the domain.

use rayon::prelude::*;

use crate::kernel::{
    extensionally_equal, indistinguishable, intersection, is_set, quasi_cardinal,
    quotient_by_indist, separate, strong_singleton, union, weak_pair, weak_singleton, Entity, QSet,
};
use crate::stats::q26prime_check_against;

use super::{AxiomReport, CheckError, Ctx, Eval, Functional, Tally, Verdict};

pub(crate) const AXIOMS: [(&str, &str); 30] = [
    ("Q1", "≡ is reflexive"),
    ("Q2", "≡ is symmetric"),
    ("Q3", "≡ is transitive"),
    ("Q4", "substitutivity for classical objects"),
    ("Q5", "no urelement is both m-atom and M-atom"),
    ("Q6", "only qsets have elements"),
    ("Q7", "sets are qsets"),
    ("Q8", "sets have no m-atom elements"),
    ("Q9", "qsets of classical objects are the sets"),
    ("Q10", "what is ≡ to an m-atom is an m-atom"),
    ("Q11", "an empty set exists"),
    ("Q12", "≡ sets are extensionally equal"),
    ("Q13", "weak pair"),
    ("Q14", "separation"),
    ("Q15", "union"),
    ("Q16", "power-qset"),
    ("Q17", "infinity"),
    ("Q18", "regularity"),
    ("Q19", "urelements have qc 0"),
    ("Q20", "qc of a set is its cardinal"),
    ("Q21", "non-empty qsets have qc > 0"),
    ("Q22", "every smaller qc is realized by a sub-qset"),
    ("Q23", "sub-qsets have no larger qc"),
    ("Q24", "proper sub-qsets have smaller qc"),
    ("Q25", "qc is additive over disjoint unions"),
    ("Q26", "qc(P(x)) = 2^qc(x)"),
    ("Q26'", "qc(z_n) = n^qc(x)"),
    ("Q27", "weak extensionality"),
    ("Q28", "replacement"),
    ("Q29", "choice"),
];

pub(crate) fn run_all(ctx: &Ctx) -> Result<Vec<AxiomReport>, CheckError> {
    AXIOMS
        .par_iter()
        .map(|&(id, title)| {
            if id == "Q17" {
                return Ok(AxiomReport {
                    id,
                    title,
                    verdict: Verdict::NotCheckable,
                    witness: None,
                    context: None,
                    cost: 0,
                    bounded: false,
                });
            }
            Ok(scan(ctx, id)?.into_report(id, title))
        })
        .collect()
}

fn member(t: &Entity, y: &Entity) -> bool {
    y.as_qset().is_some_and(|q| q.contains(t))
}

fn indist(a: &Entity, b: &Entity) -> Result<bool, CheckError> {
    Ok(indistinguishable(a, b)?)
}

fn ext_eq(a: &Entity, b: &Entity) -> Result<bool, CheckError> {
    Ok(extensionally_equal(a, b)?)
}

/// `D(x)`: an M-atom or a set.
pub(crate) fn classical(e: &Entity) -> bool {
    e.is_macro() || is_set(e)
}

/// `E(x)`: a qset all of whose elements are qsets.
fn all_qsets(e: &Entity) -> bool {
    e.as_qset().is_some_and(QSet::has_only_qset_elements)
}

fn qset_of(w: &[Entity], i: usize) -> Result<&QSet, CheckError> {
    w.get(i)
        .and_then(Entity::as_qset)
        .ok_or_else(|| CheckError::Precondition(format!("witness position {i} is not a qset")))
}

fn arg(w: &[Entity], i: usize) -> Result<&Entity, CheckError> {
    w.get(i)
        .ok_or_else(|| CheckError::Precondition(format!("witness has no position {i}")))
}

/// Substitution contexts `A(a, b)` for the classical substitutivity law.
fn q4_contexts(ctx: &Ctx) -> Vec<String> {
    let mut names: Vec<String> = ctx.predicates.iter().map(|p| p.name()).collect();
    names.extend(["=_E".to_string(), "qc".into(), "membership".into()]);
    names
}

fn q4_context(ctx: &Ctx, name: &str, a: &Entity, b: &Entity) -> Result<bool, CheckError> {
    Ok(match name {
        "=_E" => ext_eq(a, b)?,
        "qc" => quasi_cardinal(a) == quasi_cardinal(b),
        "membership" => ctx.entities.iter().all(|t| member(a, t) == member(b, t)),
        other => ctx
            .predicate(other)
            .ok_or_else(|| CheckError::UnknownId(other.to_string()))?
            .eval(b),
    })
}

fn apply_functional(ctx: &Ctx, f: Functional, w: &Entity) -> Result<Entity, CheckError> {
    let u = &ctx.universe;
    Ok(Entity::QSet(match f {
        Functional::WeakSingleton => weak_singleton(u, w)?,
        Functional::StrongSingleton => strong_singleton(u, w)?,
        Functional::PurePart => match w.as_qset() {
            Some(q) => separate(q, Entity::is_micro),
            None => u.empty(),
        },
        Functional::Empty => u.empty(),
    }))
}

fn functional_by_name(name: &str) -> Result<Functional, CheckError> {
    Functional::ALL
        .into_iter()
        .find(|f| f.name() == name)
        .ok_or_else(|| CheckError::UnknownId(name.to_string()))
}

/// Whether `w ≡ w' → f(w) ≡ f(w')` holds over the whole domain.
fn is_functional(ctx: &Ctx, images: &[Entity]) -> Result<bool, CheckError> {
    for i in 0..ctx.len() {
        for j in ctx.indist[i].ones() {
            if !indist(&images[i], &images[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn images(ctx: &Ctx, f: Functional) -> Result<Vec<Entity>, CheckError> {
    ctx.entities
        .par_iter()
        .map(|w| apply_functional(ctx, f, w))
        .collect()
}

/// `∀z (z ∈ v → ∃w (w ∈ u ∧ A(w, z)))` for the exhibited image `v`.
fn replacement_image_ok(ctx: &Ctx, f: Functional, u: &QSet) -> Result<bool, CheckError> {
    let imgs = u
        .elements()
        .iter()
        .map(|w| apply_functional(ctx, f, w))
        .collect::<Result<Vec<_>, _>>()?;
    let v = ctx.universe.qset(imgs.iter().cloned())?;
    for z in v.elements() {
        let mut found = false;
        for img in &imgs {
            if indist(z, img)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The antecedent of choice: `E(x)`, members non-empty and distinct members
/// disjoint.
fn choice_applies(x: &QSet) -> Result<bool, CheckError> {
    if !x.has_only_qset_elements() {
        return Ok(false);
    }
    let members: Vec<&QSet> = x.elements().iter().filter_map(Entity::as_qset).collect();
    if members.iter().any(|y| y.is_empty()) {
        return Ok(false);
    }
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if !intersection(a, b)?.is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `∀y ∈ x ∀v ∈ y ∃w (w ⊆ [v] ∧ qc(w) = 1 ∧ w ∩ y ≡ w ∩ u)`
fn choice_body(ctx: &Ctx, x: &QSet, u: &QSet) -> Result<bool, CheckError> {
    for y in x.elements().iter().filter_map(Entity::as_qset) {
        for v in y.elements() {
            let mut found = false;
            for t in weak_singleton(&ctx.universe, v)?.elements() {
                let w = ctx.universe.qset([t.clone()])?;
                let left = Entity::QSet(intersection(&w, y)?);
                let right = Entity::QSet(intersection(&w, u)?);
                if indist(&left, &right)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Searches a choice qset: one element of each member, then `∪x`, then
/// every domain qset.
fn choice_exists(ctx: &Ctx, x: &QSet) -> Result<bool, CheckError> {
    let members: Vec<&QSet> = x.elements().iter().filter_map(Entity::as_qset).collect();
    let picks = ctx
        .universe
        .qset(members.iter().map(|y| y.elements()[0].clone()))?;
    let mut big_union = ctx.universe.empty();
    for y in &members {
        big_union = union(&big_union, y)?;
    }
    for candidate in [&picks, &big_union] {
        if choice_body(ctx, x, candidate)? {
            return Ok(true);
        }
    }
    for i in ctx.qset_range() {
        if choice_body(ctx, x, ctx.qset(i).expect("qset range"))? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn power_members_ok(x: &QSet, p: &QSet, ctx: &Ctx) -> bool {
    let members_are_subsets = p
        .elements()
        .iter()
        .all(|t| t.as_qset().is_some_and(|t| t.is_subset(x)));
    let subsets_are_members = ctx.entities.iter().all(|t| match t.as_qset() {
        Some(tq) if tq.is_subset(x) => p.contains(t),
        _ => !p.contains(t),
    });
    members_are_subsets && subsets_are_members
}

fn parse_boxes(context: Option<&str>) -> Result<u64, CheckError> {
    context
        .and_then(|c| c.strip_prefix("n="))
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| {
            CheckError::Precondition("tuple witness needs an `n=<boxes>` context".into())
        })
}

fn q26prime_instance(ctx: &Ctx, x: &QSet, n: u64) -> Result<Option<bool>, CheckError> {
    let Some(p) = ctx.power(x)? else {
        return Ok(None);
    };
    Ok(Some(
        q26prime_check_against(x, n, &p, ctx.opts.tuple_cap)?.holds,
    ))
}

fn tuple_in_capacity(ctx: &Ctx, x: &QSet, n: u64) -> bool {
    u32::try_from(x.qc())
        .ok()
        .and_then(|e| n.checked_pow(e))
        .is_some_and(|c| c <= ctx.opts.tuple_cap)
}

/// Evaluates an axiom body on one instantiation.
pub(crate) fn body(
    ctx: &Ctx,
    id: &str,
    w: &[Entity],
    context: Option<&str>,
) -> Result<Eval, CheckError> {
    Ok(match id {
        "Q1" => Eval::from_bool(indist(arg(w, 0)?, arg(w, 0)?)?),
        "Q2" => {
            let (x, y) = (arg(w, 0)?, arg(w, 1)?);
            Eval::implies(indist(x, y)?, || indist(y, x).unwrap_or(false))
        }
        "Q3" => {
            let (x, y, z) = (arg(w, 0)?, arg(w, 1)?, arg(w, 2)?);
            Eval::implies(indist(x, y)? && indist(y, z)?, || {
                indist(x, z).unwrap_or(false)
            })
        }
        "Q4" => {
            let (x, y) = (arg(w, 0)?, arg(w, 1)?);
            let name =
                context.ok_or_else(|| CheckError::Precondition("Q4 needs a context".into()))?;
            let applies = classical(x) && classical(y) && indist(x, y)?;
            if !applies || !q4_context(ctx, name, x, x)? {
                Eval::Inapplicable
            } else {
                Eval::from_bool(q4_context(ctx, name, x, y)?)
            }
        }
        "Q5" => {
            let x = arg(w, 0)?;
            Eval::implies(x.is_micro() || x.is_macro(), || {
                !(x.is_micro() && x.is_macro())
            })
        }
        "Q6" => {
            let (x, y) = (arg(w, 0)?, arg(w, 1)?);
            Eval::implies(member(x, y), || y.is_qset())
        }
        "Q7" => {
            let x = arg(w, 0)?;
            Eval::implies(is_set(x), || x.is_qset())
        }
        "Q8" => {
            let x = arg(w, 0)?;
            Eval::implies(x.members().iter().any(Entity::is_micro), || !is_set(x))
        }
        "Q9" => {
            let x = arg(w, 0)?;
            Eval::implies(x.is_qset(), || {
                x.members().iter().all(classical) == is_set(x)
            })
        }
        "Q10" => {
            let (x, y) = (arg(w, 0)?, arg(w, 1)?);
            Eval::implies(x.is_micro() && indist(x, y)?, || y.is_micro())
        }
        "Q11" => Eval::from_bool(
            ctx.entities
                .iter()
                .any(|e| e.as_qset().is_some_and(QSet::is_empty) && is_set(e)),
        ),
        "Q12" => {
            let (x, y) = (arg(w, 0)?, arg(w, 1)?);
            let applies = is_set(x) && is_set(y) && indist(x, y)?;
            if applies {
                Eval::from_bool(ext_eq(x, y)?)
            } else {
                Eval::Inapplicable
            }
        }
        "Q13" => {
            let (x, y) = (arg(w, 0)?, arg(w, 1)?);
            let z = Entity::QSet(weak_pair(&ctx.universe, x, y)?);
            let mut ok = true;
            for t in &ctx.entities {
                if member(t, &z) != (indist(t, x)? || indist(t, y)?) {
                    ok = false;
                    break;
                }
            }
            Eval::from_bool(ok)
        }
        "Q14" => {
            let x = qset_of(w, 0)?;
            let name =
                context.ok_or_else(|| CheckError::Precondition("Q14 needs a predicate".into()))?;
            let p = ctx
                .predicate(name)
                .ok_or_else(|| CheckError::UnknownId(name.to_string()))?;
            let y = separate(x, |t| p.eval(t));
            let forward = y.elements().iter().all(|t| x.contains(t) && p.eval(t));
            let backward = x
                .elements()
                .iter()
                .filter(|t| p.eval(t))
                .all(|t| y.contains(t));
            Eval::from_bool(forward && backward)
        }
        "Q15" => {
            let x = arg(w, 0)?;
            if !all_qsets(x) {
                Eval::Inapplicable
            } else {
                let x = x.as_qset().expect("E(x) implies a qset");
                let mut y = ctx.universe.empty();
                for t in x.elements().iter().filter_map(Entity::as_qset) {
                    y = union(&y, t)?;
                }
                let parts: Vec<&QSet> = x.elements().iter().filter_map(Entity::as_qset).collect();
                let forward = y
                    .elements()
                    .iter()
                    .all(|z| parts.iter().any(|t| t.contains(z)));
                let backward = parts
                    .iter()
                    .all(|t| t.elements().iter().all(|z| y.contains(z)));
                Eval::from_bool(forward && backward)
            }
        }
        "Q16" => {
            let x = qset_of(w, 0)?;
            match ctx.power(x)? {
                Some(p) => Eval::from_bool(power_members_ok(x, &p, ctx)),
                None => Eval::Inapplicable,
            }
        }
        "Q18" => {
            let x = arg(w, 0)?;
            let applies = all_qsets(x) && !x.members().is_empty();
            if !applies {
                Eval::Inapplicable
            } else {
                let xq = x.as_qset().expect("qset");
                let mut found = false;
                for y in xq.elements().iter().filter_map(Entity::as_qset) {
                    if intersection(y, xq)?.is_empty() {
                        found = true;
                        break;
                    }
                }
                Eval::from_bool(found)
            }
        }
        "Q19" => {
            let x = arg(w, 0)?;
            Eval::implies(!x.is_qset(), || quasi_cardinal(x) == 0)
        }
        "Q20" => {
            let x = arg(w, 0)?;
            Eval::implies(x.is_qset(), || {
                quasi_cardinal(x) == x.members().len() as u64
            })
        }
        "Q21" => {
            let x = qset_of(w, 0)?;
            let empty = Entity::QSet(ctx.universe.empty());
            let nonempty = !ext_eq(&Entity::QSet(x.clone()), &empty)?;
            Eval::implies(nonempty, || x.qc() != 0)
        }
        "Q22" => {
            let x = qset_of(w, 0)?;
            match ctx.power(x)? {
                None => Eval::Inapplicable,
                Some(p) => Eval::from_bool(
                    (0..=x.qc()).all(|beta| p.elements().iter().any(|y| quasi_cardinal(y) == beta)),
                ),
            }
        }
        "Q23" => {
            let (x, y) = (qset_of(w, 0)?, qset_of(w, 1)?);
            Eval::implies(y.is_subset(x), || y.qc() <= x.qc())
        }
        "Q24" => {
            let (x, y) = (qset_of(w, 0)?, qset_of(w, 1)?);
            let proper =
                x.is_subset(y) && !ext_eq(&Entity::QSet(x.clone()), &Entity::QSet(y.clone()))?;
            Eval::implies(proper, || x.qc() < y.qc())
        }
        "Q25" => {
            let (x, y) = (qset_of(w, 0)?, qset_of(w, 1)?);
            if intersection(x, y)?.is_empty() {
                Eval::from_bool(union(x, y)?.qc() == x.qc() + y.qc())
            } else {
                Eval::Inapplicable
            }
        }
        "Q26" => {
            let x = qset_of(w, 0)?;
            match ctx.power(x)? {
                None => Eval::Inapplicable,
                Some(p) => Eval::from_bool(
                    u32::try_from(x.qc()).is_ok_and(|e| 1u64.checked_shl(e) == Some(p.qc())),
                ),
            }
        }
        "Q26'" => {
            let x = qset_of(w, 0)?;
            let n = parse_boxes(context)?;
            if !x.is_pure() || !tuple_in_capacity(ctx, x, n) {
                Eval::Inapplicable
            } else {
                match q26prime_instance(ctx, x, n)? {
                    Some(h) => Eval::from_bool(h),
                    None => Eval::Inapplicable,
                }
            }
        }
        "Q27" => {
            let (x, y) = (qset_of(w, 0)?, qset_of(w, 1)?);
            let matched = quotient_by_indist(x) == quotient_by_indist(y);
            if matched {
                Eval::from_bool(indist(arg(w, 0)?, arg(w, 1)?)?)
            } else {
                Eval::Inapplicable
            }
        }
        "Q28" => {
            let u = qset_of(w, 0)?;
            let name =
                context.ok_or_else(|| CheckError::Precondition("Q28 needs a functional".into()))?;
            let f = functional_by_name(name)?;
            if !is_functional(ctx, &images(ctx, f)?)? {
                Eval::Inapplicable
            } else {
                Eval::from_bool(replacement_image_ok(ctx, f, u)?)
            }
        }
        "Q29" => {
            let x = qset_of(w, 0)?;
            if choice_applies(x)? {
                Eval::from_bool(choice_exists(ctx, x)?)
            } else {
                Eval::Inapplicable
            }
        }
        other => return Err(CheckError::UnknownId(other.to_string())),
    })
}

/// Instantiates axiom `id` over the domain.
fn scan(ctx: &Ctx, id: &'static str) -> Result<Tally, CheckError> {
    let n = ctx.len();
    let all = 0..n;
    let qsets = ctx.qset_range();
    let e = |i: usize| ctx.entities[i].clone();

    let unary = |range: std::ops::Range<usize>| {
        ctx.par_tally(range, |i, t| {
            let w = [e(i)];
            t.record(body(ctx, id, &w, None)?, || w.to_vec());
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
        "Q1" | "Q5" | "Q7" | "Q8" | "Q9" | "Q19" | "Q20" => unary(all),
        "Q15" | "Q16" | "Q18" | "Q21" | "Q22" | "Q26" | "Q29" => {
            let mut t = unary(qsets)?;
            if id == "Q29" {
                t.mark_bounded();
            }
            if matches!(id, "Q16" | "Q22" | "Q26")
                && ctx.qset_range().any(|i| {
                    ctx.entities[i].members().len() as u64 > u64::from(ctx.opts.power_bound)
                })
            {
                t.mark_bounded();
            }
            Ok(t)
        }
        "Q2" | "Q6" | "Q10" => binary(all.clone(), all),
        "Q12" | "Q23" | "Q24" | "Q25" => binary(qsets.clone(), qsets),
        "Q3" => ctx.par_tally(all, |i, t| {
            for j in ctx.indist[i].ones() {
                match ctx.indist[j].first_outside(&ctx.indist[i]) {
                    None => t.add_bulk(n as u64, ctx.indist[j].count()),
                    Some(k) => {
                        let w = [e(i), e(j), e(k)];
                        t.record(body(ctx, id, &w, None)?, || w.to_vec());
                    }
                }
            }
            Ok(())
        }),
        "Q4" => {
            let contexts = q4_contexts(ctx);
            ctx.par_tally(all, |i, t| {
                if !classical(&ctx.entities[i]) {
                    t.add_bulk(n as u64, 0);
                    return Ok(());
                }
                for j in 0..n {
                    if !classical(&ctx.entities[j]) || !ctx.equiv(i, j) {
                        t.add_bulk(1, 0);
                        continue;
                    }
                    let w = [e(i), e(j)];
                    for c in &contexts {
                        t.record_in(body(ctx, id, &w, Some(c))?, Some(c), || w.to_vec());
                    }
                }
                Ok(())
            })
        }
        "Q11" => {
            let mut t = ctx.tally();
            t.record(body(ctx, id, &[], None)?, Vec::new);
            Ok(t)
        }
        "Q13" => ctx.par_tally(all.clone(), |i, t| {
            for j in all.clone() {
                let (x, y) = (e(i), e(j));
                let z = weak_pair(&ctx.universe, &x, &y)?;
                let expected = ctx.indist[i].union(&ctx.indist[j]);
                let fast = z.qc() == expected.count()
                    && expected.ones().all(|k| z.contains(&ctx.entities[k]));
                let eval = if fast {
                    Eval::Holds
                } else {
                    body(ctx, id, &[x.clone(), y.clone()], None)?
                };
                t.record(eval, || vec![x, y]);
            }
            Ok(())
        }),
        "Q14" => ctx.par_tally(qsets, |i, t| {
            let w = [e(i)];
            for p in &ctx.predicates {
                let name = p.name();
                t.record_in(body(ctx, id, &w, Some(&name))?, Some(&name), || w.to_vec());
            }
            Ok(())
        }),
        "Q26'" => ctx.par_tally(qsets, |i, t| {
            let x = ctx.qset(i).expect("qset range");
            if !x.is_pure() {
                t.add_bulk(1, 0);
                return Ok(());
            }
            for n in 1..=ctx.opts.max_boxes {
                if !tuple_in_capacity(ctx, x, n) || x.qc() > u64::from(ctx.opts.power_bound) {
                    t.mark_bounded();
                    continue;
                }
                let name = format!("n={n}");
                let w = [e(i)];
                t.record_in(body(ctx, id, &w, Some(&name))?, Some(&name), || w.to_vec());
            }
            Ok(())
        }),
        "Q27" => {
            let mut keyed: Vec<(Vec<(crate::kernel::Class, u64)>, usize)> = qsets
                .clone()
                .map(|i| (quotient_by_indist(ctx.qset(i).expect("qset range")), i))
                .collect();
            keyed.sort();
            let mut t = ctx.tally();
            let total = (qsets.len() as u64).pow(2);
            let mut matched = 0u64;
            let mut start = 0;
            while start < keyed.len() {
                let mut end = start + 1;
                while end < keyed.len() && keyed[end].0 == keyed[start].0 {
                    end += 1;
                }
                for a in &keyed[start..end] {
                    for b in &keyed[start..end] {
                        matched += 1;
                        let (x, y) = (e(a.1), e(b.1));
                        let eval = Eval::from_bool(indist(&x, &y)?);
                        t.record(eval, || vec![x, y]);
                    }
                }
                start = end;
            }
            t.add_bulk(total - matched, 0);
            Ok(t)
        }
        "Q28" => {
            let mut t = ctx.tally();
            for &f in &ctx.opts.functionals {
                let imgs = images(ctx, f)?;
                if !is_functional(ctx, &imgs)? {
                    t.add_bulk(qsets.len() as u64, 0);
                    continue;
                }
                let part = ctx.par_tally(qsets.clone(), |i, t| {
                    let u = ctx.qset(i).expect("qset range");
                    let eval = Eval::from_bool(replacement_image_ok(ctx, f, u)?);
                    t.record_in(eval, Some(f.name()), || vec![e(i)]);
                    Ok(())
                })?;
                t.merge(part);
            }
            Ok(t)
        }
        other => Err(CheckError::UnknownId(other.to_string())),
    }
}
