//! Bounded model checking of the axioms and theorems on a finite universe.
//!
//! Quantifiers range over a finite domain built from the universe: every
//! urelement, every qset of urelements, and at each further level the qsets
//! of at most `width` elements that contain a qset of the level below.

mod axioms;
mod domain;
mod order;
mod report;
mod theorems;

use std::fmt;

use thiserror::Error;

use crate::kernel::{Entity, KernelError, Kind, Universe};
use crate::stats::StatsError;

pub use order::{check_order_impossibility, OrderCheck};
pub use report::{render_table, reports_to_json};

pub(crate) use domain::Ctx;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown axiom or theorem `{0}`")]
    UnknownId(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// No instantiation satisfied the antecedent.
    Vacuous,
    NotCheckable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Vacuous => "vacuous",
            Verdict::NotCheckable => "not-checkable",
        })
    }
}

/// Outcome of checking one axiom or theorem.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub id: &'static str,
    pub title: &'static str,
    pub verdict: Verdict,
    /// Falsifying instantiation, present exactly when the verdict is `Fails`.
    pub witness: Option<Vec<Entity>>,
    /// Schema instance (predicate or functional condition) of the witness.
    pub context: Option<String>,
    /// Instantiations examined.
    pub cost: u64,
    /// Set when some instantiations were skipped because of a bound.
    pub bounded: bool,
}

/// A unary property usable in the separation schema and in substitution
/// contexts. It sees entities through the public API only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Micro,
    Macro,
    Set,
    OfKind(Kind),
    QcAtLeast(u64),
}

impl Predicate {
    pub fn name(&self) -> String {
        match self {
            Predicate::Micro => "m".into(),
            Predicate::Macro => "M".into(),
            Predicate::Set => "Z".into(),
            Predicate::OfKind(k) => format!("kind={k}"),
            Predicate::QcAtLeast(n) => format!("qc>={n}"),
        }
    }

    pub fn eval(&self, e: &Entity) -> bool {
        match self {
            Predicate::Micro => e.is_micro(),
            Predicate::Macro => e.is_macro(),
            Predicate::Set => crate::kernel::is_set(e),
            Predicate::OfKind(k) => e.kind() == Some(k),
            Predicate::QcAtLeast(n) => crate::kernel::quasi_cardinal(e) >= *n,
        }
    }

    /// `m`, `M`, `Z`, one kind-membership test per declared kind, and
    /// `qc >= 1`, `qc >= 2`.
    pub fn default_suite(u: &Universe) -> Vec<Predicate> {
        let mut suite = vec![Predicate::Micro, Predicate::Macro, Predicate::Set];
        suite.extend(u.kinds().map(|(k, _)| Predicate::OfKind(k.clone())));
        suite.extend([Predicate::QcAtLeast(1), Predicate::QcAtLeast(2)]);
        suite
    }
}

/// A term `w ↦ f(w)`; the replacement condition is `A(w, s) := s ≡ f(w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    WeakSingleton,
    StrongSingleton,
    PurePart,
    Empty,
}

impl Functional {
    pub const ALL: [Functional; 4] = [
        Functional::WeakSingleton,
        Functional::StrongSingleton,
        Functional::PurePart,
        Functional::Empty,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Functional::WeakSingleton => "weak-singleton",
            Functional::StrongSingleton => "strong-singleton",
            Functional::PurePart => "pure-part",
            Functional::Empty => "empty",
        }
    }
}

/// Deliberate model corruptions used to show that the checker detects them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// `P(x)` loses `x` itself, so `qc(P(x)) = 2^qc(x) - 1`.
    PowerQsetUndercount,
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Nesting levels of qsets in the domain; at least 1.
    pub depth: u32,
    /// Largest qset built at levels above the first.
    pub width: usize,
    /// Qsets above this quasi-cardinal are not expanded into power-qsets.
    pub power_bound: u32,
    /// Upper limit on domain qsets; further ones are dropped and reports
    /// are flagged bounded.
    pub max_qsets: usize,
    /// `None` selects [`Predicate::default_suite`].
    pub predicates: Option<Vec<Predicate>>,
    pub functionals: Vec<Functional>,
    /// Largest box count for tuple axioms and cover theorems.
    pub max_boxes: u64,
    pub tuple_cap: u64,
    pub fault: Option<Fault>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            depth: 2,
            width: 2,
            power_bound: crate::kernel::DEFAULT_POWER_BOUND,
            max_qsets: 4096,
            predicates: None,
            functionals: Functional::ALL.to_vec(),
            max_boxes: 4,
            tuple_cap: crate::stats::DEFAULT_ENUMERATION_CAP,
            fault: None,
        }
    }
}

impl CheckOptions {
    fn validate(&self) -> Result<(), CheckError> {
        if self.depth == 0 {
            return Err(CheckError::Precondition(
                "depth bound must be at least 1".into(),
            ));
        }
        if self.width == 0 {
            return Err(CheckError::Precondition("width must be at least 1".into()));
        }
        if matches!(&self.predicates, Some(p) if p.is_empty()) {
            return Err(CheckError::Precondition("predicate suite is empty".into()));
        }
        if self.functionals.is_empty() {
            return Err(CheckError::Precondition("functional suite is empty".into()));
        }
        if self.max_boxes == 0 {
            return Err(CheckError::Precondition(
                "max_boxes must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One report per axiom, Q1 to Q29 with Q26′ after Q26, in that order.
pub fn check_axioms(u: &Universe, opts: &CheckOptions) -> Result<Vec<AxiomReport>, CheckError> {
    opts.validate()?;
    let ctx = Ctx::build(u, opts)?;
    axioms::run_all(&ctx)
}

/// One report per theorem: T1 to T9, L1, then ZF2 to ZF4 for the cover
/// counts of finite classical sets.
pub fn check_theorems(u: &Universe, opts: &CheckOptions) -> Result<Vec<AxiomReport>, CheckError> {
    opts.validate()?;
    let ctx = Ctx::build(u, opts)?;
    theorems::run_all(&ctx)
}

/// Re-evaluates the body of a failed report on its witness. Returns `true`
/// when the violation is reproduced.
pub fn replay_witness(
    u: &Universe,
    opts: &CheckOptions,
    report: &AxiomReport,
) -> Result<bool, CheckError> {
    let Some(witness) = &report.witness else {
        return Ok(false);
    };
    opts.validate()?;
    let ctx = Ctx::build(u, opts)?;
    let eval = match axioms::body(&ctx, report.id, witness, report.context.as_deref()) {
        Err(CheckError::UnknownId(_)) => {
            theorems::body(&ctx, report.id, witness, report.context.as_deref())?
        }
        other => other?,
    };
    Ok(eval == Eval::Fails)
}

/// Result of evaluating one instantiation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Eval {
    /// The antecedent is false.
    Inapplicable,
    Holds,
    Fails,
}

impl Eval {
    pub(crate) fn implies(antecedent: bool, consequent: impl FnOnce() -> bool) -> Eval {
        if !antecedent {
            Eval::Inapplicable
        } else if consequent() {
            Eval::Holds
        } else {
            Eval::Fails
        }
    }

    pub(crate) fn from_bool(holds: bool) -> Eval {
        if holds {
            Eval::Holds
        } else {
            Eval::Fails
        }
    }
}

/// Running totals for one report.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    cost: u64,
    relevant: u64,
    witness: Option<Vec<Entity>>,
    context: Option<String>,
    bounded: bool,
}

impl Tally {
    pub(crate) fn record(&mut self, eval: Eval, witness: impl FnOnce() -> Vec<Entity>) {
        self.record_in(eval, None, witness)
    }

    pub(crate) fn record_in(
        &mut self,
        eval: Eval,
        context: Option<&str>,
        witness: impl FnOnce() -> Vec<Entity>,
    ) {
        self.cost += 1;
        match eval {
            Eval::Inapplicable => {}
            Eval::Holds => self.relevant += 1,
            Eval::Fails => {
                self.relevant += 1;
                if self.witness.is_none() {
                    self.witness = Some(witness());
                    self.context = context.map(str::to_owned);
                }
            }
        }
    }

    /// Counts instantiations settled in bulk without a witness.
    pub(crate) fn add_bulk(&mut self, cost: u64, relevant: u64) {
        self.cost += cost;
        self.relevant += relevant;
    }

    pub(crate) fn mark_bounded(&mut self) {
        self.bounded = true;
    }

    /// Appends `other`; the first witness in order wins.
    pub(crate) fn merge(&mut self, other: Tally) {
        self.cost += other.cost;
        self.relevant += other.relevant;
        self.bounded |= other.bounded;
        if self.witness.is_none() && other.witness.is_some() {
            self.witness = other.witness;
            self.context = other.context;
        }
    }

    pub(crate) fn into_report(self, id: &'static str, title: &'static str) -> AxiomReport {
        let verdict = if self.witness.is_some() {
            Verdict::Fails
        } else if self.relevant == 0 {
            Verdict::Vacuous
        } else {
            Verdict::Holds
        };
        AxiomReport {
            id,
            title,
            verdict,
            witness: self.witness,
            context: self.context,
            cost: self.cost,
            bounded: self.bounded,
        }
    }
}
