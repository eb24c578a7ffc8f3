//! Finite quasi-set models and exact counting of particle distributions.
//!
//! - [`kernel`]: atoms, qsets, indistinguishability and the qset-forming
//!   operations over a finite [`kernel::Universe`].
//! - [`stats`]: Maxwell-Boltzmann, Bose-Einstein and Fermi-Dirac counts,
//!   enumeration, multinomial parcels and most-probable occupancies.
//! - [`checker`]: evaluates the axioms and theorems of the theory on a
//!   concrete universe and reports verdicts with witnesses.
//! - [`cli`]: the `qstat` command-line front end.

pub mod checker;
pub mod cli;
pub mod kernel;
pub mod stats;
