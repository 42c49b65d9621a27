use alloc::vec;
use alloc::vec::Vec;

use super::{canonical_result, ClusterError, ClusteringResult};
use crate::math::squared_distance;
use crate::{Hourly, HOURS};

/// Largest number of set partitions [`brute_force_optimum`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// Number of ways to partition `n` items into `k` nonempty blocks
/// (Stirling number of the second kind), saturating at `u128::MAX`.
pub fn partition_count(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    // row[j] = S(i, j)
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128).saturating_mul(row[j]).saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// Exact minimum-WCSS partition of `profiles` into `k` nonempty clusters.
pub fn brute_force_optimum(profiles: &[Hourly], k: usize) -> Result<ClusteringResult, ClusterError> {
    if k == 0 {
        return Err(ClusterError::ZeroK);
    }
    if k > profiles.len() {
        return Err(ClusterError::TooFewProfiles { k, distinct: profiles.len() });
    }
    let partitions = partition_count(profiles.len(), k);
    if partitions > BRUTE_FORCE_LIMIT {
        return Err(ClusterError::TooLarge { partitions });
    }
    let mut search = Search { profiles, k, labels: vec![0; profiles.len()], best: None };
    search.descend(0, 0);
    let (labels, _) = search.best.expect("at least one partition");
    Ok(canonical_result(profiles, &labels, k, 0, 0, 0))
}

struct Search<'a> {
    profiles: &'a [Hourly],
    k: usize,
    labels: Vec<usize>,
    best: Option<(Vec<usize>, f64)>,
}

impl Search<'_> {
    /// Restricted growth strings: item `i` joins an open block or opens block `used`.
    fn descend(&mut self, i: usize, used: usize) {
        let n = self.profiles.len();
        if i == n {
            if used == self.k {
                let cost = self.cost();
                if self.best.as_ref().map_or(true, |(_, c)| cost < *c) {
                    self.best = Some((self.labels.clone(), cost));
                }
            }
            return;
        }
        if self.k - used > n - i {
            return;
        }
        for block in 0..=used.min(self.k - 1) {
            self.labels[i] = block;
            self.descend(i + 1, if block == used { used + 1 } else { used });
        }
    }

    fn cost(&self) -> f64 {
        let mut sums = vec![[0.0; HOURS]; self.k];
        let mut counts = vec![0usize; self.k];
        for (p, &b) in self.profiles.iter().zip(&self.labels) {
            counts[b] += 1;
            for (s, v) in sums[b].iter_mut().zip(p) {
                *s += v;
            }
        }
        let means: Vec<Hourly> = sums.iter().zip(&counts).map(|(s, &n)| s.map(|v| v / n as f64)).collect();
        self.profiles.iter().zip(&self.labels).map(|(p, &b)| squared_distance(p, &means[b])).sum()
    }
}
