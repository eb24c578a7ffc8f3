use std::fmt;
use std::str::FromStr;

use crate::kernel::QSet;

use super::StatsError;

/// Box occupation numbers `(n_1, …, n_n)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OccupancyVector(Vec<u64>);

impl OccupancyVector {
    pub fn new(entries: Vec<u64>) -> Result<Self, StatsError> {
        if entries.is_empty() {
            return Err(StatsError::InvalidArgument(
                "an occupancy vector needs at least one box".into(),
            ));
        }
        Ok(OccupancyVector(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn boxes(&self) -> usize {
        self.0.len()
    }

    /// `N = Σ n_i`
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Exclusion: every box holds at most one particle.
    pub fn is_fd_admissible(&self) -> bool {
        self.0.iter().all(|&n| n <= 1)
    }
}

impl fmt::Display for OccupancyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl FromStr for OccupancyVector {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, StatsError> {
        let entries = s
            .split('|')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| StatsError::Format(format!("bad occupancy `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        OccupancyVector::new(entries)
    }
}

/// Ordered tuple `⟨y_1, …, y_n⟩` of pairwise disjoint sub-qsets covering a
/// base qset.
#[derive(Clone, Debug)]
pub struct DistributionTuple {
    boxes: Vec<QSet>,
}

impl DistributionTuple {
    pub(crate) fn new(boxes: Vec<QSet>) -> Self {
        DistributionTuple { boxes }
    }

    pub fn boxes(&self) -> &[QSet] {
        &self.boxes
    }

    /// `n_i = qc(y_i)`
    pub fn occupancy(&self) -> OccupancyVector {
        OccupancyVector(self.boxes.iter().map(QSet::qc).collect())
    }
}

/// Weak compositions of `total` into `parts` non-negative entries, in
/// reverse-lexicographic order: `(N,0,…,0)` first, `(0,…,0,N)` last.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<u64>>,
    max_part: Option<u64>,
}

impl Compositions {
    pub fn new(total: u64, parts: usize) -> Self {
        let current = (parts > 0).then(|| {
            let mut v = vec![0; parts];
            v[0] = total;
            v
        });
        Compositions {
            current,
            max_part: None,
        }
    }

    /// Restricts the stream to compositions whose entries are `<= max_part`.
    pub fn with_max_part(mut self, max_part: u64) -> Self {
        self.max_part = Some(max_part);
        self
    }

    fn advance(v: &mut [u64]) -> bool {
        let last = v.len() - 1;
        let Some(i) = (0..last).rev().find(|&i| v[i] > 0) else {
            return false;
        };
        v[i] -= 1;
        let tail: u64 = v[i + 1..].iter().sum::<u64>() + 1;
        for slot in &mut v[i + 1..] {
            *slot = 0;
        }
        v[i + 1] = tail;
        true
    }
}

impl Iterator for Compositions {
    type Item = OccupancyVector;

    fn next(&mut self) -> Option<OccupancyVector> {
        loop {
            let v = self.current.as_mut()?;
            let out = v.clone();
            if !Self::advance(v) {
                self.current = None;
            }
            if self.max_part.is_none_or(|m| out.iter().all(|&n| n <= m)) {
                return Some(OccupancyVector(out));
            }
        }
    }
}
