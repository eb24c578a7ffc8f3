mod common;

use common::*;
use num_bigint::BigUint;
use qstat::kernel::{QSet, Universe};
use qstat::stats::{
    constrained_most_probable, count_disjoint_covers, count_distributions, count_sum_covers,
    enumerate_distributions, most_probable_occupancy, multinomial_weight, q26prime_check,
    verify_leibniz_identity, ConstraintMode, Distribution, EnergyConstraint, LevelScheme,
    OccupancyVector, StatModel, StatsError, DEFAULT_COMPOSITION_CAP,
};

fn ov(v: &[u64]) -> OccupancyVector {
    OccupancyVector::new(v.to_vec()).unwrap()
}

fn entries(vs: &[OccupancyVector]) -> Vec<Vec<u64>> {
    vs.iter().map(|v| v.entries().to_vec()).collect()
}

fn atoms(n: u32) -> QSet {
    let u = Universe::builder().kind("a", n).build().unwrap();
    u.qset(u.micro_atoms().cloned()).unwrap()
}

fn macro_set(n: usize) -> QSet {
    let mut b = Universe::builder();
    for i in 0..n {
        b = b.m_atom(&format!("A{i}"));
    }
    let u = b.build().unwrap();
    u.qset(u.macro_atoms().iter().cloned()).unwrap()
}

#[test]
fn composition_oracle_sanity() {
    assert_eq!(compositions(3, 2), [[3, 0], [2, 1], [1, 2], [0, 3]]);
    assert_eq!(compositions(4, 3).len(), 15);
    assert_eq!(labeled_count(&[2, 1]), 3);
    assert_eq!(disjoint_cover_scan(4, 2), 16);
}

#[test]
fn multinomial_matches_labeled_count() {
    for particles in 0..=7u64 {
        for boxes in 1..=4usize {
            for v in compositions(particles, boxes) {
                assert_eq!(
                    multinomial_weight(&ov(&v)),
                    BigUint::from(labeled_count(&v)),
                    "{v:?}"
                );
            }
        }
    }
    assert_eq!(multinomial_weight(&ov(&[1, 1, 1, 1])), BigUint::from(24u32));
    assert_eq!(multinomial_weight(&ov(&[3, 0])), BigUint::from(1u32));
}

#[test]
fn counts_match_brute_enumeration() {
    for particles in 0..=8u64 {
        for boxes in 1..=5u64 {
            let words = assignment_words(particles as usize, boxes as usize);
            let be = compositions(particles, boxes as usize);
            let fd: Vec<_> = be.iter().filter(|v| v.iter().all(|&k| k <= 1)).collect();
            let count = |m| count_distributions(particles, boxes, m).unwrap();
            assert_eq!(count(StatModel::MB), BigUint::from(words.len()));
            assert_eq!(count(StatModel::BE), BigUint::from(be.len()));
            assert_eq!(count(StatModel::FD), BigUint::from(fd.len()));
        }
    }
    assert_eq!(
        count_distributions(2, 3, StatModel::FD).unwrap(),
        BigUint::from(3u32)
    );
    assert_eq!(
        count_distributions(0, 7, StatModel::MB).unwrap(),
        BigUint::from(1u32)
    );
}

#[test]
fn streams_match_oracle_order() {
    for particles in 0..=5u32 {
        let x = atoms(particles);
        for boxes in 1..=4u64 {
            let be: Vec<Vec<u64>> = enumerate_distributions(&x, boxes, StatModel::BE, 0)
                .unwrap()
                .map(|d| d.occupancy().entries().to_vec())
                .collect();
            assert_eq!(be, compositions(u64::from(particles), boxes as usize));

            let fd: Vec<Vec<u64>> = enumerate_distributions(&x, boxes, StatModel::FD, 0)
                .unwrap()
                .map(|d| d.occupancy().entries().to_vec())
                .collect();
            let expected: Vec<Vec<u64>> = be
                .into_iter()
                .filter(|v| v.iter().all(|&k| k <= 1))
                .collect();
            assert_eq!(fd, expected);

            let mb: Vec<Vec<u64>> = enumerate_distributions(&x, boxes, StatModel::MB, 1 << 20)
                .unwrap()
                .map(|d| d.occupancy().entries().to_vec())
                .collect();
            let words: Vec<Vec<u64>> = assignment_words(particles as usize, boxes as usize)
                .iter()
                .map(|w| occupancy_of(w, boxes as usize))
                .collect();
            assert_eq!(mb, words);
        }
    }
}

#[test]
fn mb_tuples_are_disjoint_covers() {
    let x = atoms(4);
    for d in enumerate_distributions(&x, 3, StatModel::MB, 100).unwrap() {
        let Distribution::Tuple(t) = d else {
            panic!("MB yields tuples")
        };
        let total: u64 = t.boxes().iter().map(QSet::qc).sum();
        assert_eq!(total, 4);
        for b in t.boxes() {
            assert!(b.is_subset(&x));
        }
    }
}

#[test]
fn leibniz_parcels_match_oracle() {
    for particles in 0..=9u64 {
        for boxes in 1..=4u64 {
            let r = verify_leibniz_identity(particles, boxes).unwrap();
            assert!(r.equal);
            let expected: Vec<(Vec<u64>, BigUint)> = compositions(particles, boxes as usize)
                .into_iter()
                .map(|v| {
                    let w = degenerate_weight(&v, &vec![1; v.len()]);
                    (v, w)
                })
                .collect();
            let got: Vec<(Vec<u64>, BigUint)> = r
                .parcels
                .iter()
                .map(|(v, w)| (v.entries().to_vec(), w.clone()))
                .collect();
            assert_eq!(got, expected);
        }
    }
    let r = verify_leibniz_identity(4, 3).unwrap();
    assert_eq!(r.lhs, BigUint::from(81u32));
    assert_eq!(r.parcels.len(), 15);
}

#[test]
fn most_probable_matches_scan() {
    for particles in 0..=12u64 {
        for boxes in 1..=4u64 {
            let r = most_probable_occupancy(particles, boxes, StatModel::MB).unwrap();
            let (argmax, weight) = argmax_scan(
                particles,
                &vec![0; boxes as usize],
                &vec![1; boxes as usize],
                Budget::None,
            );
            assert_eq!(entries(&r.argmax), argmax, "N={particles} n={boxes}");
            assert_eq!(r.weight, weight);
        }
    }
    let r = most_probable_occupancy(4, 2, StatModel::MB).unwrap();
    assert_eq!(entries(&r.argmax), [[2, 2]]);
    assert_eq!(r.weight, BigUint::from(6u32));
    for m in [StatModel::BE, StatModel::FD] {
        assert!(matches!(
            most_probable_occupancy(3, 2, m),
            Err(StatsError::Equiweighted(_))
        ));
    }
}

#[test]
fn constrained_matches_three_level_scan() {
    for particles in [1u64, 5, 17, 40, 100] {
        for energy in (0..=2 * particles).step_by(((particles / 7).max(1)) as usize) {
            let scheme =
                LevelScheme::integer(&[0, 1, 2], &[1, 1, 1], particles, Some(energy as i64))
                    .unwrap();
            let r = constrained_most_probable(&scheme, DEFAULT_COMPOSITION_CAP).unwrap();
            let (argmax, weight) = three_level_scan(particles, energy);
            assert!(r.feasible);
            assert_eq!(entries(&r.argmax), argmax, "N={particles} E={energy}");
            assert_eq!(r.weight, weight);
        }
    }
}

#[test]
fn constrained_matches_generic_scan() {
    let cases: [(&[i64], &[u64]); 4] = [
        (&[0, 1], &[1, 1]),
        (&[0, 1, 3], &[2, 1, 3]),
        (&[-1, 0, 2, 5], &[1, 2, 2, 1]),
        (&[0, 0, 1], &[1, 1, 4]),
    ];
    for (energies, g) in cases {
        for particles in 0..=9u64 {
            for target in -3..=20i64 {
                for mode in [ConstraintMode::Exact, ConstraintMode::AtMost] {
                    let scheme = LevelScheme::integer(energies, g, particles, Some(target))
                        .unwrap()
                        .with_energy(Some(EnergyConstraint {
                            total: num_rational::BigRational::from_integer(target.into()),
                            mode,
                        }));
                    let r = constrained_most_probable(&scheme, DEFAULT_COMPOSITION_CAP).unwrap();
                    let budget = match mode {
                        ConstraintMode::Exact => Budget::Exact(target),
                        ConstraintMode::AtMost => Budget::AtMost(target),
                    };
                    let (argmax, weight) = argmax_scan(particles, energies, g, budget);
                    assert_eq!(r.feasible, !argmax.is_empty());
                    assert_eq!(entries(&r.argmax), argmax);
                    if r.feasible {
                        assert_eq!(r.weight, weight);
                    }
                }
            }
            let free = LevelScheme::integer(energies, g, particles, None).unwrap();
            let r = constrained_most_probable(&free, DEFAULT_COMPOSITION_CAP).unwrap();
            let (argmax, weight) = argmax_scan(particles, energies, g, Budget::None);
            assert_eq!(entries(&r.argmax), argmax);
            assert_eq!(r.weight, weight);
        }
    }
}

#[test]
fn two_level_forced_point() {
    let scheme = LevelScheme::integer(&[0, 1], &[1, 1], 1000, Some(300)).unwrap();
    let r = constrained_most_probable(&scheme, DEFAULT_COMPOSITION_CAP).unwrap();
    assert_eq!(entries(&r.argmax), [[700, 300]]);
    assert_eq!(r.weight, binomial(1000, 300));
}

#[test]
fn q26prime_matches_power() {
    for qc in 0..=6u32 {
        for n in 1..=4u64 {
            let c = q26prime_check(&atoms(qc), n, 1 << 20).unwrap();
            assert!(c.holds);
            assert_eq!(u128::from(c.enumerated), u128::from(n).pow(qc));
        }
    }
    let u = Universe::builder()
        .kind("a", 1)
        .kind("b", 1)
        .build()
        .unwrap();
    let x = u.qset(u.micro_atoms().cloned()).unwrap();
    let c = q26prime_check(&x, 3, 100).unwrap();
    assert!(c.holds);
    assert_eq!(c.enumerated, 9);
}

#[test]
fn cover_counts_match_scan() {
    for size in 0..=6usize {
        let x = macro_set(size);
        for n in 1..=3u32 {
            let scan = disjoint_cover_scan(size as u32, n);
            assert_eq!(count_disjoint_covers(&x, u64::from(n)).unwrap(), scan);
            assert_eq!(count_sum_covers(&x, u64::from(n)).unwrap(), scan);
        }
    }
}
