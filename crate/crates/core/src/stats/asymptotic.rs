//! Lagrange-multiplier solution of the two-constraint occupancy problem.
//!
//! Energies are shifted and rescaled to `u_i = (ε_i - ε_min) / Δ ∈ [0, 1]`
//! before solving; `b = βΔ` and `a = α + βε_min` are the multipliers in those
//! units, so `α + βε_i = a + b·u_i`.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::levels::{ConstraintMode, LevelScheme};
use super::{StatModel, StatsError};

const MAX_BISECTIONS: usize = 400;
const MAX_BRACKET_DOUBLINGS: usize = 64;

/// Mean occupancies with their multipliers.
#[derive(Clone, Debug, PartialEq)]
pub struct Asymptotic {
    pub occupancies: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    /// `|Σ n_i - N|`
    pub particle_residual: f64,
    /// `|Σ n_i ε_i - E|`, measured against the target actually used.
    pub energy_residual: f64,
}

impl Asymptotic {
    pub fn fractions(&self) -> Vec<f64> {
        let total: f64 = self.occupancies.iter().sum();
        self.occupancies.iter().map(|n| n / total).collect()
    }
}

struct Problem {
    model: StatModel,
    g: Vec<f64>,
    ln_g: Vec<f64>,
    u: Vec<f64>,
    n: f64,
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `1 / (e^x + 1)` without overflow.
fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Bisects a monotone predicate boundary between `lo` (false) and `hi` (true).
fn bisect(mut lo: f64, mut hi: f64, mut above: impl FnMut(f64) -> bool) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

impl Problem {
    fn occupancy(&self, a: f64, b: f64, i: usize) -> f64 {
        let x = a + b * self.u[i];
        match self.model {
            StatModel::MB => (self.ln_g[i] - x).exp(),
            StatModel::BE => self.g[i] / x.exp_m1(),
            StatModel::FD => self.g[i] * fermi(x),
        }
    }

    fn total(&self, a: f64, b: f64) -> f64 {
        (0..self.u.len()).map(|i| self.occupancy(a, b, i)).sum()
    }

    /// The `a` for which `Σ n_i = N` at fixed `b`.
    fn eliminate_alpha(&self, b: f64) -> Result<f64, StatsError> {
        match self.model {
            StatModel::MB => {
                let lse = log_sum_exp(self.ln_g.iter().zip(&self.u).map(|(lg, u)| lg - b * u));
                Ok(lse - self.n.ln())
            }
            StatModel::BE => {
                // a = t - min_i(b u_i) with t > 0 keeps every level off the pole;
                // the total falls from +∞ to 0 as ln t runs over the reals
                let shift = self.u.iter().map(|u| b * u).fold(f64::INFINITY, f64::min);
                let total_at = |ln_t: f64| self.total(ln_t.exp() - shift, b);
                let (lo, hi) = self.bracket(0.0, |ln_t| total_at(ln_t) <= self.n)?;
                let ln_t = bisect(lo, hi, |ln_t| total_at(ln_t) <= self.n);
                Ok(ln_t.exp() - shift)
            }
            StatModel::FD => {
                let (lo, hi) = self.bracket(0.0, |a| self.total(a, b) <= self.n)?;
                Ok(bisect(lo, hi, |a| self.total(a, b) <= self.n))
            }
        }
    }

    /// Finds `lo < hi` with `above(lo) == false` and `above(hi) == true` by
    /// doubling outward from `start`.
    fn bracket(
        &self,
        start: f64,
        mut above: impl FnMut(f64) -> bool,
    ) -> Result<(f64, f64), StatsError> {
        let mut step = 1.0;
        let (mut lo, mut hi) = (start - step, start + step);
        for _ in 0..MAX_BRACKET_DOUBLINGS {
            let lo_ok = !above(lo);
            let hi_ok = above(hi);
            if lo_ok && hi_ok {
                return Ok((lo, hi));
            }
            step *= 2.0;
            if !lo_ok {
                lo = start - step;
            }
            if !hi_ok {
                hi = start + step;
            }
        }
        Err(StatsError::Domain(
            "multiplier root could not be bracketed".into(),
        ))
    }

    fn energy(&self, a: f64, b: f64) -> f64 {
        (0..self.u.len())
            .map(|i| self.occupancy(a, b, i) * self.u[i])
            .sum()
    }
}

fn rational_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Extreme total energies reachable with `N` particles, as exact rationals.
fn attainable_range(scheme: &LevelScheme, model: StatModel) -> (BigRational, BigRational) {
    let n = scheme.particles();
    let mut order: Vec<usize> = (0..scheme.levels().len()).collect();
    order.sort_by(|&i, &j| scheme.levels()[i].energy.cmp(&scheme.levels()[j].energy));
    let fill = |indices: &mut dyn Iterator<Item = &usize>| {
        let mut left = n;
        let mut total = BigRational::zero();
        for &i in indices {
            let level = &scheme.levels()[i];
            let take = match model {
                StatModel::FD => left.min(level.degeneracy),
                _ => left,
            };
            total += &level.energy * BigRational::from_integer(take.into());
            left -= take;
        }
        total
    };
    let low = fill(&mut order.iter());
    let high = fill(&mut order.iter().rev());
    (low, high)
}

/// Solves `Σ n_i = N`, `Σ n_i ε_i = E` for the model's mean occupancies.
///
/// The root in `β` is bracketed by doubling and then bisected to machine
/// precision; `α` is recomputed from the particle constraint at every step.
/// In at-most mode the unconstrained (`β = 0`) point is returned whenever its
/// energy does not exceed `E`.
pub fn asymptotic_distribution(
    scheme: &LevelScheme,
    model: StatModel,
) -> Result<Asymptotic, StatsError> {
    let levels = scheme.levels();
    if scheme.particles() == 0 {
        return Err(StatsError::Domain(
            "asymptotic solution needs N >= 1".into(),
        ));
    }
    if levels.len() < 2 {
        return Err(StatsError::Domain(
            "asymptotic solution needs at least two levels".into(),
        ));
    }
    let Some(constraint) = scheme.energy() else {
        return Err(StatsError::Domain(
            "asymptotic solution needs an energy constraint E".into(),
        ));
    };
    let capacity: u64 = levels.iter().map(|l| l.degeneracy).sum();
    if model == StatModel::FD && scheme.particles() >= capacity {
        return Err(StatsError::Domain(format!(
            "FD needs N < Σg = {capacity}; every state would be filled"
        )));
    }

    let e_min = levels
        .iter()
        .map(|l| &l.energy)
        .min()
        .expect("levels present");
    let e_max = levels
        .iter()
        .map(|l| &l.energy)
        .max()
        .expect("levels present");
    let span = e_max - e_min;
    let n = scheme.particles() as f64;
    let e_min_f = rational_f64(e_min);
    let span_f = rational_f64(&span);
    let g: Vec<f64> = levels.iter().map(|l| l.degeneracy as f64).collect();
    let problem = Problem {
        model,
        ln_g: g.iter().map(|g| g.ln()).collect(),
        g,
        u: if span.is_zero() {
            vec![0.0; levels.len()]
        } else {
            levels
                .iter()
                .map(|l| rational_f64(&((&l.energy - e_min) / &span)))
                .collect()
        },
        n,
    };

    let finish = |b: f64, target: f64| -> Result<Asymptotic, StatsError> {
        let a = problem.eliminate_alpha(b)?;
        let occupancies: Vec<f64> = (0..levels.len())
            .map(|i| problem.occupancy(a, b, i))
            .collect();
        if model == StatModel::BE {
            if let Some(i) = (0..levels.len()).find(|&i| a + b * problem.u[i] <= 0.0) {
                return Err(StatsError::Domain(format!(
                    "BE occupancy pole at level {i} (α + βε ≤ 0)"
                )));
            }
        }
        let beta = if span.is_zero() { 0.0 } else { b / span_f };
        let alpha = a - beta * e_min_f;
        let particles: f64 = occupancies.iter().sum();
        let energy: f64 = occupancies
            .iter()
            .zip(levels)
            .map(|(n, l)| n * rational_f64(&l.energy))
            .sum();
        Ok(Asymptotic {
            occupancies,
            alpha,
            beta,
            particle_residual: (particles - n).abs(),
            energy_residual: (energy - target).abs(),
        })
    };

    let target = &constraint.total;
    let target_f = rational_f64(target);
    let particles_q = BigRational::from_integer(scheme.particles().into());

    if span.is_zero() {
        let only = e_min * &particles_q;
        let fits = match constraint.mode {
            ConstraintMode::Exact => &only == target,
            ConstraintMode::AtMost => &only <= target,
        };
        if !fits {
            return Err(StatsError::Domain(format!(
                "E = {target} is not attainable: every level has energy {e_min}"
            )));
        }
        return finish(0.0, rational_f64(&only));
    }

    if constraint.mode == ConstraintMode::AtMost {
        let a0 = problem.eliminate_alpha(0.0)?;
        let free_energy = e_min_f * n + span_f * problem.energy(a0, 0.0);
        if free_energy <= target_f {
            return finish(0.0, free_energy);
        }
    }

    let (low, high) = attainable_range(scheme, model);
    let strictly_inside = match constraint.mode {
        ConstraintMode::Exact => &low < target && target < &high,
        ConstraintMode::AtMost => &low < target,
    };
    if !strictly_inside {
        return Err(StatsError::Domain(format!(
            "E = {target} lies outside the open attainable range ({low}, {high})"
        )));
    }

    // scaled target in the normalized energy units; U(b) decreases in b
    let scaled = rational_f64(&((target - e_min * &particles_q) / &span));
    let energy_at = |b: f64| -> Result<f64, StatsError> {
        let a = problem.eliminate_alpha(b)?;
        Ok(problem.energy(a, b))
    };
    let mut failure = None;
    let mut below = |b: f64| match energy_at(b) {
        Ok(u) => u <= scaled,
        Err(e) => {
            failure.get_or_insert(e);
            true
        }
    };
    let (lo, hi) = problem.bracket(0.0, &mut below)?;
    let b = bisect(lo, hi, &mut below);
    if let Some(e) = failure {
        return Err(e);
    }
    finish(b, target_f)
}
