use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::counting::{binomial_big, multinomial_weight};
use super::levels::{degeneracy_factor, ConstraintMode, LevelScheme};
use super::occupancy::OccupancyVector;
use super::StatsError;

/// Default bound on the number of compositions scanned.
pub const DEFAULT_COMPOSITION_CAP: u64 = 10_000_000;

/// Exact maximizers of `N! Π g_i^{n_i} / n_i!` under the scheme's constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedOptimum {
    pub argmax: Vec<OccupancyVector>,
    pub weight: BigUint,
    pub feasible: bool,
    /// Feasible occupancy vectors visited.
    pub examined: u64,
}

struct Scan<'a> {
    energies: &'a [i128],
    target: Option<(i128, ConstraintMode)>,
    suffix_min: Vec<i128>,
    suffix_max: Vec<i128>,
    ln_fact: Vec<f64>,
    ln_g: Vec<f64>,
    best: f64,
    candidates: Vec<(f64, Vec<u64>)>,
    examined: u64,
}

impl Scan<'_> {
    fn tolerance(&self) -> f64 {
        1e-9 * self.best.abs().max(1.0)
    }

    fn energy_window_open(&self, level: usize, used: i128, left: u64) -> bool {
        let Some((target, mode)) = self.target else {
            return true;
        };
        let left = left as i128;
        let low = used + left * self.suffix_min[level];
        let high = used + left * self.suffix_max[level];
        match mode {
            ConstraintMode::Exact => low <= target && target <= high,
            ConstraintMode::AtMost => low <= target,
        }
    }

    fn visit(&mut self, occ: &mut Vec<u64>, level: usize, used: i128, left: u64) {
        if !self.energy_window_open(level, used, left) {
            return;
        }
        let k = self.energies.len();
        if level + 1 == k {
            occ.push(left);
            self.leaf(occ);
            occ.pop();
            return;
        }
        for n in (0..=left).rev() {
            occ.push(n);
            self.visit(
                occ,
                level + 1,
                used + n as i128 * self.energies[level],
                left - n,
            );
            occ.pop();
        }
    }

    fn leaf(&mut self, occ: &[u64]) {
        self.examined += 1;
        let total = occ.iter().sum::<u64>() as usize;
        let log_weight = self.ln_fact[total]
            + occ
                .iter()
                .zip(&self.ln_g)
                .map(|(&n, g)| n as f64 * g - self.ln_fact[n as usize])
                .sum::<f64>();
        if self.candidates.is_empty() || log_weight > self.best {
            self.best = log_weight;
            let floor = self.best - self.tolerance();
            self.candidates.retain(|(w, _)| *w >= floor);
        }
        if log_weight >= self.best - self.tolerance() {
            self.candidates.push((log_weight, occ.to_vec()));
        }
    }
}

/// Scans every occupancy vector with `Σ n_i = N` that meets the energy
/// constraint and returns the exact maximizers of the degeneracy-weighted
/// multinomial. Log-weights only pre-select candidates; the final comparison
/// is on exact integers.
pub fn constrained_most_probable(
    scheme: &LevelScheme,
    cap: u64,
) -> Result<ConstrainedOptimum, StatsError> {
    let k = scheme.levels().len() as u64;
    let particles = scheme.particles();
    let space = binomial_big(particles + k - 1, k - 1);
    if space.to_u64().is_none_or(|s| s > cap) {
        return Err(StatsError::Capacity {
            what: "occupancy scan (use the asymptotic solver for large N)",
            needed: space.to_string(),
            bound: cap,
        });
    }

    let (energies, total) = scheme.scaled_energies()?;
    let target = total.map(|t| (t, scheme.energy().expect("constraint present").mode));
    let mut suffix_min = energies.clone();
    let mut suffix_max = energies.clone();
    for i in (0..energies.len().saturating_sub(1)).rev() {
        suffix_min[i] = suffix_min[i].min(suffix_min[i + 1]);
        suffix_max[i] = suffix_max[i].max(suffix_max[i + 1]);
    }
    let mut ln_fact = Vec::with_capacity(particles as usize + 1);
    ln_fact.push(0.0);
    for i in 1..=particles {
        ln_fact.push(ln_fact[(i - 1) as usize] + (i as f64).ln());
    }
    let mut scan = Scan {
        energies: &energies,
        target,
        suffix_min,
        suffix_max,
        ln_fact,
        ln_g: scheme
            .levels()
            .iter()
            .map(|l| (l.degeneracy as f64).ln())
            .collect(),
        best: f64::NEG_INFINITY,
        candidates: Vec::new(),
        examined: 0,
    };
    scan.visit(&mut Vec::with_capacity(k as usize), 0, 0, particles);

    if scan.candidates.is_empty() {
        return Ok(ConstrainedOptimum {
            argmax: Vec::new(),
            weight: BigUint::zero(),
            feasible: false,
            examined: scan.examined,
        });
    }

    let mut weight = BigUint::zero();
    let mut argmax: Vec<OccupancyVector> = Vec::new();
    for (_, occ) in scan.candidates {
        let v = OccupancyVector::new(occ)?;
        let w = multinomial_weight(&v) * degeneracy_factor(scheme.levels(), v.entries());
        if w > weight {
            weight = w;
            argmax.clear();
            argmax.push(v);
        } else if w == weight {
            argmax.push(v);
        }
    }
    argmax.sort_by(|a, b| b.cmp(a));
    argmax.dedup();
    Ok(ConstrainedOptimum {
        argmax,
        weight,
        feasible: true,
        examined: scan.examined,
    })
}
