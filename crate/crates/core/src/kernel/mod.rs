//! Finite models of quasi-set theory.
//!
//! A [`Universe`] fixes the atoms; [`QSet`]s are built over them. The only
//! comparison offered on m-atoms is [`indistinguishable`]; identity of
//! m-atoms is represented by hidden labels used for counting alone.

mod entity;
mod ops;
mod relation;
mod signature;
mod universe;

pub use entity::{Entity, Kind, MacroAtom, MicroAtom, QSet, Sort};
pub use ops::{
    combine, difference, extensionally_equal, indistinguishable, intersection, is_set,
    permutation_swap_check, power_qset, power_qset_bounded, quasi_cardinal, quotient_by_indist,
    separate, strong_singleton, union, weak_pair, weak_singleton, CombineMode, DEFAULT_POWER_BOUND,
};
pub use relation::{classify_q_relation, QRelation, QRelationClass};
pub use signature::{Class, Signature};
pub use universe::{Universe, UniverseBuilder};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("entities belong to different universes")]
    DomainMismatch,
    #[error("ill-formed formula: {0}")]
    IllFormed(String),
    #[error("capacity exceeded: {what} needs {needed}, bound is {bound}")]
    Capacity {
        what: &'static str,
        needed: u64,
        bound: u64,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("malformed universe description: {0}")]
    Format(String),
}
