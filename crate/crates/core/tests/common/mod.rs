//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the library's counting code.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::One;

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Compositions of `total` into `parts` non-negative entries, first entry
/// descending, then the rest recursively (reverse-lexicographic).
pub fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every assignment word of `particles` labeled objects to `boxes` boxes,
/// counted up in base `boxes`.
pub fn assignment_words(particles: usize, boxes: usize) -> Vec<Vec<usize>> {
    let total = boxes.pow(particles as u32);
    (0..total)
        .map(|mut k| {
            let mut w = vec![0; particles];
            for i in (0..particles).rev() {
                w[i] = k % boxes;
                k /= boxes;
            }
            w
        })
        .collect()
}

pub fn occupancy_of(word: &[usize], boxes: usize) -> Vec<u64> {
    let mut v = vec![0; boxes];
    for &b in word {
        v[b] += 1;
    }
    v
}

/// Number of labeled assignments with occupancy `v`, by direct count.
pub fn labeled_count(v: &[u64]) -> u64 {
    let particles: u64 = v.iter().sum();
    assignment_words(particles as usize, v.len())
        .iter()
        .filter(|w| occupancy_of(w, v.len()) == v)
        .count() as u64
}

/// `N! Π g_i^{n_i} / Π n_i!` from factorials.
pub fn degenerate_weight(v: &[u64], g: &[u64]) -> BigUint {
    let particles: u64 = v.iter().sum();
    let mut num = factorial(particles);
    let mut den = BigUint::one();
    for (&n, &gi) in v.iter().zip(g) {
        num *= BigUint::from(gi).pow(n as u32);
        den *= factorial(n);
    }
    num / den
}

/// Energy constraint for [`argmax_scan`].
#[derive(Clone, Copy, Debug)]
pub enum Budget {
    None,
    Exact(i64),
    AtMost(i64),
}

/// Maximizers of the degenerate weight over every composition meeting the
/// budget, in reverse-lexicographic order. Empty when nothing is feasible.
pub fn argmax_scan(
    particles: u64,
    energies: &[i64],
    g: &[u64],
    budget: Budget,
) -> (Vec<Vec<u64>>, BigUint) {
    let mut best = BigUint::default();
    let mut argmax = Vec::new();
    for v in compositions(particles, energies.len()) {
        let e: i64 = v
            .iter()
            .zip(energies)
            .map(|(&n, &eps)| n as i64 * eps)
            .sum();
        let ok = match budget {
            Budget::None => true,
            Budget::Exact(t) => e == t,
            Budget::AtMost(t) => e <= t,
        };
        if !ok {
            continue;
        }
        let w = degenerate_weight(&v, g);
        if argmax.is_empty() || w > best {
            best = w;
            argmax = vec![v];
        } else if w == best {
            argmax.push(v);
        }
    }
    (argmax, best)
}

/// The three-level scan with energies 0, 1, 2: `n_3` free, the rest forced.
pub fn three_level_scan(particles: u64, energy: u64) -> (Vec<Vec<u64>>, BigUint) {
    let fact: Vec<BigUint> = (0..=particles).map(factorial).collect();
    let mut best = BigUint::default();
    let mut argmax: Vec<Vec<u64>> = Vec::new();
    for n3 in 0..=energy / 2 {
        let n2 = energy - 2 * n3;
        if n2 + n3 > particles {
            continue;
        }
        let n1 = particles - n2 - n3;
        let f = |k: u64| &fact[k as usize];
        let w = f(particles) / (f(n1) * f(n2) * f(n3));
        if argmax.is_empty() || w > best {
            best = w;
            argmax = vec![vec![n1, n2, n3]];
        } else if w == best {
            argmax.push(vec![n1, n2, n3]);
        }
    }
    argmax.sort_by(|a, b| b.cmp(a));
    (argmax, best)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Ordered `n`-tuples of subsets of a `size`-element set that are pairwise
/// disjoint and cover it, by scanning every tuple of bitmasks.
pub fn disjoint_cover_scan(size: u32, n: u32) -> u64 {
    let full = (1u64 << size) - 1;
    let subsets = 1u64 << size;
    fn go(subsets: u64, full: u64, used: u64, left: u32) -> u64 {
        if left == 0 {
            return u64::from(used == full);
        }
        (0..subsets)
            .filter(|m| m & used == 0)
            .map(|m| go(subsets, full, used | m, left - 1))
            .sum()
    }
    go(subsets, full, 0, n)
}
