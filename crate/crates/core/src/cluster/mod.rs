//! k-means over daily profiles.
//!
//! [`kmeans_once`] is a single Lloyd run from a Forgy start (k distinct
//! profiles drawn uniformly). [`kmeans_best`] keeps the lowest-WCSS run
//! out of many restarts; restart `i` is seeded with
//! [`derive_seed(seed, i)`](crate::derive_seed), so the winner does not
//! depend on which thread ran which restart. [`elbow_scan`] repeats that
//! over a range of k and suggests the k with the largest second difference
//! of the WCSS curve. [`brute_force_optimum`] enumerates every partition of
//! a small instance and serves as the oracle for the above.
//!
//! Cluster labels are canonical: clusters are numbered in lexicographic
//! order of their centroids, so equal partitions give equal results
//! regardless of input order or restart.

mod brute;
mod elbow;
mod lloyd;

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::{lexicographic, squared_distance};
use crate::{Hourly, HOURS};

pub use brute::{brute_force_optimum, partition_count, BRUTE_FORCE_LIMIT};
pub use elbow::{elbow_scan, elbow_scan_with, ElbowEntry, ElbowReport, KRange};
pub use lloyd::{kmeans_best, kmeans_once, KMeansProblem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClusterError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("restarts must be at least 1")]
    ZeroRestarts,
    #[error("k = {k} exceeds the {distinct} distinct profiles")]
    TooFewProfiles { k: usize, distinct: usize },
    #[error("{assignments} assignments for {profiles} profiles")]
    LengthMismatch { assignments: usize, profiles: usize },
    #[error("assignment {cluster} refers to one of only {centroids} centroids")]
    MissingCentroid { cluster: usize, centroids: usize },
    #[error("invalid k range {k_min}..={k_max}: {reason}")]
    InvalidRange { k_min: usize, k_max: usize, reason: &'static str },
    #[error("{partitions} partitions exceed the exhaustive search limit")]
    TooLarge { partitions: u128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl KMeansConfig {
    pub const DEFAULT_RESTARTS: usize = 1000;
    pub const DEFAULT_MAX_ITERATIONS: usize = 100;

    pub fn new(k: usize) -> Result<Self, ClusterError> {
        if k == 0 {
            return Err(ClusterError::ZeroK);
        }
        Ok(Self { k, restarts: Self::DEFAULT_RESTARTS, max_iterations: Self::DEFAULT_MAX_ITERATIONS, seed: 0 })
    }

    pub fn with_restarts(mut self, restarts: usize) -> Result<Self, ClusterError> {
        if restarts == 0 {
            return Err(ClusterError::ZeroRestarts);
        }
        self.restarts = restarts;
        Ok(self)
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations.max(1);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_k(mut self, k: usize) -> Result<Self, ClusterError> {
        if k == 0 {
            return Err(ClusterError::ZeroK);
        }
        self.k = k;
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    /// Cluster index of each profile, in input order.
    pub assignments: Vec<usize>,
    /// Representative profile of each cluster: the mean of its members.
    pub centroids: Vec<Hourly>,
    pub per_cluster_wcss: Vec<f64>,
    pub total_wcss: f64,
    pub winning_restart: usize,
    pub iterations_used: usize,
    /// Lloyd iterations, over every run folded into this result, where WCSS went up.
    pub monotonicity_violations: usize,
}

impl ClusteringResult {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k()];
        for &a in &self.assignments {
            sizes[a] += 1;
        }
        sizes
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.assignments.iter().enumerate().filter(|(_, &a)| a == cluster).map(|(i, _)| i).collect()
    }

    /// Keeps the lower-WCSS result (lower restart index on ties) and adds up
    /// the monotonicity violations of both. Associative and commutative, so
    /// restarts may be folded in any order.
    pub fn better(self, other: Self) -> Self {
        let violations = self.monotonicity_violations + other.monotonicity_violations;
        let key = |r: &Self| (r.total_wcss, r.winning_restart);
        let self_wins = match key(&self).0.total_cmp(&key(&other).0) {
            core::cmp::Ordering::Less => true,
            core::cmp::Ordering::Greater => false,
            core::cmp::Ordering::Equal => key(&self).1 <= key(&other).1,
        };
        let mut winner = if self_wins { self } else { other };
        winner.monotonicity_violations = violations;
        winner
    }
}

/// Per-cluster and total within-cluster sum of squares.
pub fn wcss(profiles: &[Hourly], assignments: &[usize], centroids: &[Hourly]) -> Result<(Vec<f64>, f64), ClusterError> {
    if profiles.len() != assignments.len() {
        return Err(ClusterError::LengthMismatch { assignments: assignments.len(), profiles: profiles.len() });
    }
    let mut per_cluster = vec![0.0; centroids.len()];
    for (p, &a) in profiles.iter().zip(assignments) {
        let c = centroids.get(a).ok_or(ClusterError::MissingCentroid { cluster: a, centroids: centroids.len() })?;
        per_cluster[a] += squared_distance(p, c);
    }
    let total = per_cluster.iter().sum();
    Ok((per_cluster, total))
}

/// Member means of each cluster, `None` for empty clusters.
pub(crate) fn cluster_means(profiles: &[Hourly], assignments: &[usize], k: usize) -> Vec<Option<Hourly>> {
    let mut sums = vec![[0.0; HOURS]; k];
    let mut counts = vec![0usize; k];
    for (p, &a) in profiles.iter().zip(assignments) {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(p) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(counts)
        .map(|(s, n)| (n > 0).then(|| s.map(|v| v / n as f64)))
        .collect()
}

/// Builds a result from a partition with every cluster nonempty, relabelling
/// clusters in lexicographic centroid order.
pub(crate) fn canonical_result(
    profiles: &[Hourly],
    assignments: &[usize],
    k: usize,
    winning_restart: usize,
    iterations_used: usize,
    monotonicity_violations: usize,
) -> ClusteringResult {
    let means: Vec<Hourly> = cluster_means(profiles, assignments, k)
        .into_iter()
        .map(|m| m.expect("every cluster has members"))
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| lexicographic(&means[a], &means[b]).then(a.cmp(&b)));
    let mut relabel = vec![0; k];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    let assignments: Vec<usize> = assignments.iter().map(|&a| relabel[a]).collect();
    let centroids: Vec<Hourly> = order.iter().map(|&old| means[old]).collect();
    let (per_cluster_wcss, total_wcss) = wcss(profiles, &assignments, &centroids).expect("consistent by construction");
    ClusteringResult {
        assignments,
        centroids,
        per_cluster_wcss,
        total_wcss,
        winning_restart,
        iterations_used,
        monotonicity_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wcss_of_identical_profiles_is_zero() {
        let p = [[1.5; HOURS]; 4];
        let (per, total) = wcss(&p, &[0, 0, 0, 0], &[[1.5; HOURS]]).unwrap();
        assert_eq!(per, vec![0.0]);
        assert_eq!(total, 0.0);
    }

    #[test]
    fn wcss_zero_and_two_around_one() {
        let (per, total) = wcss(&[[0.0; HOURS], [2.0; HOURS]], &[0, 0], &[[1.0; HOURS]]).unwrap();
        assert_eq!(per, vec![48.0]);
        assert_eq!(total, 48.0);
    }

    #[test]
    fn wcss_rejects_bad_assignments() {
        assert_eq!(
            wcss(&[[0.0; HOURS]], &[1], &[[0.0; HOURS]]),
            Err(ClusterError::MissingCentroid { cluster: 1, centroids: 1 })
        );
        assert!(matches!(wcss(&[[0.0; HOURS]], &[], &[]), Err(ClusterError::LengthMismatch { .. })));
    }

    #[test]
    fn config_validation() {
        assert_eq!(KMeansConfig::new(0), Err(ClusterError::ZeroK));
        assert_eq!(KMeansConfig::new(2).unwrap().with_restarts(0), Err(ClusterError::ZeroRestarts));
        let c = KMeansConfig::new(4).unwrap();
        assert_eq!((c.restarts, c.max_iterations), (1000, 100));
    }

    #[test]
    fn canonical_labels_follow_centroid_order() {
        let p = [[5.0; HOURS], [0.0; HOURS], [5.0; HOURS]];
        let r = canonical_result(&p, &[0, 1, 0], 2, 0, 1, 0);
        assert_eq!(r.assignments, vec![1, 0, 1]);
        assert_eq!(r.centroids[0], [0.0; HOURS]);
    }

    #[test]
    fn better_prefers_low_wcss_then_low_restart() {
        let mk = |w: f64, r: usize| ClusteringResult {
            assignments: vec![],
            centroids: vec![],
            per_cluster_wcss: vec![],
            total_wcss: w,
            winning_restart: r,
            iterations_used: 0,
            monotonicity_violations: 1,
        };
        assert_eq!(mk(2.0, 0).better(mk(1.0, 5)).winning_restart, 5);
        assert_eq!(mk(1.0, 7).better(mk(1.0, 3)).winning_restart, 3);
        assert_eq!(mk(1.0, 3).better(mk(1.0, 7)).winning_restart, 3);
        assert_eq!(mk(1.0, 3).better(mk(1.0, 7)).monotonicity_violations, 2);
    }
}
