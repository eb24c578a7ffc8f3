//! Closed-form counts and multinomial parcels.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};

use super::occupancy::{Compositions, OccupancyVector};
use super::{StatModel, StatsError};

fn exponent(particles: u64) -> Result<u32, StatsError> {
    u32::try_from(particles)
        .map_err(|_| StatsError::InvalidArgument(format!("particle count {particles} too large")))
}

fn require_boxes(boxes: u64) -> Result<(), StatsError> {
    if boxes == 0 {
        Err(StatsError::InvalidArgument(
            "at least one box is required".into(),
        ))
    } else {
        Ok(())
    }
}

/// `C(n, k)` over unbounded integers; zero when `k > n`.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        binomial(BigUint::from(n), BigUint::from(k))
    }
}

/// Number of ways to distribute `particles` over `boxes`:
/// MB `n^N`, BE `C(N+n-1, n-1)`, FD `C(n, N)`.
pub fn count_distributions(
    particles: u64,
    boxes: u64,
    model: StatModel,
) -> Result<BigUint, StatsError> {
    require_boxes(boxes)?;
    Ok(match model {
        StatModel::MB => BigUint::from(boxes).pow(exponent(particles)?),
        StatModel::BE => binomial_big(particles + boxes - 1, boxes - 1),
        StatModel::FD => binomial_big(boxes, particles),
    })
}

/// `N! / Π n_i!`, the number of MB tuples with occupancy `v`.
pub fn multinomial_weight(v: &OccupancyVector) -> BigUint {
    // product of binomials over running prefix sums avoids the big N!
    let mut weight = BigUint::one();
    let mut seen = 0u64;
    for &n in v.entries() {
        seen += n;
        weight *= binomial_big(seen, n);
    }
    weight
}

/// Both sides of `n^N = Σ N!/Π n_i!` with the parcels of the sum.
#[derive(Clone, Debug)]
pub struct LeibnizRecord {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub equal: bool,
    pub parcels: Vec<(OccupancyVector, BigUint)>,
}

pub fn verify_leibniz_identity(particles: u64, boxes: u64) -> Result<LeibnizRecord, StatsError> {
    let lhs = count_distributions(particles, boxes, StatModel::MB)?;
    let parcels: Vec<(OccupancyVector, BigUint)> = Compositions::new(particles, boxes as usize)
        .map(|v| {
            let w = multinomial_weight(&v);
            (v, w)
        })
        .collect();
    let rhs = parcels.iter().map(|(_, w)| w).sum::<BigUint>();
    Ok(LeibnizRecord {
        equal: lhs == rhs,
        lhs,
        rhs,
        parcels,
    })
}

/// Maximizers of a weight over occupancy vectors; ties are all kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MostProbable {
    pub argmax: Vec<OccupancyVector>,
    pub weight: BigUint,
}

/// Occupancy vectors of maximal multinomial weight.
///
/// Moving a particle from a box with `a` to one with `b <= a - 2` multiplies
/// the weight by `a / (b + 1) > 1`, so the maximizers are exactly the balanced
/// vectors: `N mod n` entries equal to `⌈N/n⌉`, the rest `⌊N/n⌋`.
pub fn most_probable_occupancy(
    particles: u64,
    boxes: u64,
    model: StatModel,
) -> Result<MostProbable, StatsError> {
    require_boxes(boxes)?;
    if model != StatModel::MB {
        return Err(StatsError::Equiweighted(model));
    }
    let n =
        usize::try_from(boxes).map_err(|_| StatsError::InvalidArgument("too many boxes".into()))?;
    let low = particles / boxes;
    let high_count = (particles % boxes) as usize;

    // the positions holding `low + 1` range over `high_count`-subsets; the
    // 0/1 compositions come out reverse-lexicographically already
    let argmax: Vec<OccupancyVector> = Compositions::new(high_count as u64, n)
        .with_max_part(1)
        .map(|mask| {
            let entries = mask.entries().iter().map(|&b| low + b).collect();
            OccupancyVector::new(entries).expect("at least one box")
        })
        .collect();
    let weight = multinomial_weight(&argmax[0]);
    Ok(MostProbable { argmax, weight })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(e: &[u64]) -> OccupancyVector {
        OccupancyVector::new(e.to_vec()).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(
            count_distributions(3, 2, StatModel::MB).unwrap(),
            8u32.into()
        );
        assert_eq!(
            count_distributions(3, 2, StatModel::BE).unwrap(),
            4u32.into()
        );
        assert_eq!(
            count_distributions(3, 2, StatModel::FD).unwrap(),
            0u32.into()
        );
        assert_eq!(
            count_distributions(0, 7, StatModel::MB).unwrap(),
            1u32.into()
        );
        assert_eq!(
            count_distributions(2, 3, StatModel::FD).unwrap(),
            3u32.into()
        );
        assert_eq!(
            count_distributions(4, 4, StatModel::FD).unwrap(),
            1u32.into()
        );
        assert!(count_distributions(1, 0, StatModel::MB).is_err());
    }

    #[test]
    fn big_counts_do_not_overflow() {
        let c = count_distributions(64, 2, StatModel::MB).unwrap();
        assert_eq!(c.to_string(), "18446744073709551616");
        let w = multinomial_weight(&ov(&[21, 0]));
        assert_eq!(w, 1u32.into());
        let w = multinomial_weight(&ov(&[1; 25]));
        assert_eq!(w.to_string(), "15511210043330985984000000");
    }

    #[test]
    fn parcels() {
        assert_eq!(multinomial_weight(&ov(&[3, 0])), 1u32.into());
        assert_eq!(multinomial_weight(&ov(&[2, 1])), 3u32.into());
        assert_eq!(multinomial_weight(&ov(&[1, 1, 1, 1])), 24u32.into());
    }

    #[test]
    fn leibniz() {
        let r = verify_leibniz_identity(3, 2).unwrap();
        assert!(r.equal);
        let weights: Vec<u32> = r
            .parcels
            .iter()
            .map(|(_, w)| u32::try_from(w).unwrap())
            .collect();
        assert_eq!(weights, [1, 3, 3, 1]);
        let r = verify_leibniz_identity(5, 1).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (1u32.into(), 1u32.into()));
        let r = verify_leibniz_identity(4, 3).unwrap();
        assert_eq!(r.lhs, 81u32.into());
        assert_eq!(r.parcels.len(), 15);
        assert!(r.equal);
    }

    #[test]
    fn most_probable() {
        let m = most_probable_occupancy(3, 2, StatModel::MB).unwrap();
        assert_eq!(m.argmax, vec![ov(&[2, 1]), ov(&[1, 2])]);
        assert_eq!(m.weight, 3u32.into());
        let m = most_probable_occupancy(4, 2, StatModel::MB).unwrap();
        assert_eq!(m.argmax, vec![ov(&[2, 2])]);
        assert_eq!(m.weight, 6u32.into());
        let m = most_probable_occupancy(0, 3, StatModel::MB).unwrap();
        assert_eq!(m.argmax, vec![ov(&[0, 0, 0])]);
        assert_eq!(m.weight, 1u32.into());
        assert!(matches!(
            most_probable_occupancy(3, 2, StatModel::BE),
            Err(StatsError::Equiweighted(StatModel::BE))
        ));
        assert!(most_probable_occupancy(3, 2, StatModel::FD).is_err());
    }
}
