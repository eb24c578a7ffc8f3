//! Counting, enumeration and most-probable occupancies for particles
//! distributed into boxes under the three classical statistics.

mod asymptotic;
mod counting;
mod enumerate;
mod levels;
mod occupancy;
mod optimize;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kernel::KernelError;

pub use asymptotic::{asymptotic_distribution, Asymptotic};
pub use counting::{
    binomial_big, count_distributions, most_probable_occupancy, multinomial_weight,
    verify_leibniz_identity, LeibnizRecord, MostProbable,
};
pub use enumerate::{
    count_disjoint_covers, count_sum_covers, enumerate_distributions, q26prime_check,
    q26prime_check_against, Distribution, Distributions, MbTuples, Q26Check,
    DEFAULT_ENUMERATION_CAP,
};
pub use levels::{parse_decimal, ConstraintMode, EnergyConstraint, Level, LevelScheme};
pub use occupancy::{Compositions, DistributionTuple, OccupancyVector};
pub use optimize::{constrained_most_probable, ConstrainedOptimum, DEFAULT_COMPOSITION_CAP};

/// Maxwell-Boltzmann, Bose-Einstein or Fermi-Dirac.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatModel {
    MB,
    BE,
    FD,
}

impl StatModel {
    pub const ALL: [StatModel; 3] = [StatModel::MB, StatModel::BE, StatModel::FD];
}

impl fmt::Display for StatModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StatModel::MB => "MB",
            StatModel::BE => "BE",
            StatModel::FD => "FD",
        })
    }
}

impl FromStr for StatModel {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, StatsError> {
        match s.to_ascii_lowercase().as_str() {
            "mb" => Ok(StatModel::MB),
            "be" => Ok(StatModel::BE),
            "fd" => Ok(StatModel::FD),
            _ => Err(StatsError::Format(format!(
                "unknown model `{s}` (expected mb, be or fd)"
            ))),
        }
    }
}

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("capacity exceeded for {what}: {needed} > {bound}")]
    Capacity {
        what: &'static str,
        needed: String,
        bound: u64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}: all states equiweighted under this model")]
    Equiweighted(StatModel),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("format error: {0}")]
    Format(String),
}
