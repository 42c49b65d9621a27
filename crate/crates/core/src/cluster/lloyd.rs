use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{canonical_result, cluster_means, wcss, ClusterError, ClusteringResult, KMeansConfig};
use crate::math::{lexicographic, squared_distance};
use crate::seed::derive_seed;
use crate::Hourly;

/// Relative rise in WCSS between Lloyd iterations attributed to rounding.
const MONOTONE_TOLERANCE: f64 = 1e-12;

/// Profiles plus k, validated once and shared by every restart.
#[derive(Debug, Clone)]
pub struct KMeansProblem<'a> {
    profiles: &'a [Hourly],
    k: usize,
    /// Index of the first occurrence of each distinct profile, ascending.
    distinct: Vec<usize>,
}

impl<'a> KMeansProblem<'a> {
    pub fn new(profiles: &'a [Hourly], k: usize) -> Result<Self, ClusterError> {
        if k == 0 {
            return Err(ClusterError::ZeroK);
        }
        let distinct = distinct_indices(profiles);
        if k > distinct.len() {
            return Err(ClusterError::TooFewProfiles { k, distinct: distinct.len() });
        }
        Ok(Self { profiles, k, distinct })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn profiles(&self) -> &'a [Hourly] {
        self.profiles
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }

    /// Restart number `restart` of `config`, seeded with `derive_seed(config.seed, restart)`.
    pub fn run_restart(&self, config: &KMeansConfig, restart: usize) -> ClusteringResult {
        let mut result = self.run(derive_seed(config.seed, restart as u64), config.max_iterations);
        result.winning_restart = restart;
        result
    }

    /// One Lloyd run from a Forgy start drawn with `seed`.
    pub fn run(&self, seed: u64, max_iterations: usize) -> ClusteringResult {
        let k = self.k;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        // Partial Fisher-Yates over the distinct profiles.
        let mut pool = self.distinct.clone();
        for i in 0..k {
            let j = rng.random_range(i..pool.len());
            pool.swap(i, j);
        }
        self.run_from(&pool[..k], max_iterations)
    }

    /// One Lloyd run started from the profiles at `initial` as centroids.
    ///
    /// # Panics
    /// If `initial` does not hold exactly k indices of distinct profiles.
    pub fn run_from(&self, initial: &[usize], max_iterations: usize) -> ClusteringResult {
        let (profiles, k) = (self.profiles, self.k);
        assert_eq!(initial.len(), k, "need k initial centroids");
        let mut centroids: Vec<Hourly> = initial.iter().map(|&i| profiles[i]).collect();
        for (a, c) in centroids.iter().enumerate() {
            assert!(centroids[..a].iter().all(|b| b != c), "initial centroids must be distinct");
        }

        let mut assignments: Vec<usize> = vec![usize::MAX; profiles.len()];
        let mut previous_wcss = f64::INFINITY;
        let mut violations = 0;
        let mut iterations = 0;
        for iteration in 1..=max_iterations.max(1) {
            let mut next = assign(profiles, &centroids);
            repair_empty_clusters(profiles, &mut next, k);
            if next == assignments {
                break;
            }
            assignments = next;
            centroids = cluster_means(profiles, &assignments, k)
                .into_iter()
                .map(|m| m.expect("repair leaves no empty cluster"))
                .collect();
            let (_, total) = wcss(profiles, &assignments, &centroids).expect("consistent by construction");
            let rose = total - previous_wcss > MONOTONE_TOLERANCE * previous_wcss;
            debug_assert!(!rose, "Lloyd WCSS rose from {previous_wcss} to {total} at iteration {iteration}");
            if rose {
                violations += 1;
            }
            previous_wcss = total;
            iterations = iteration;
        }
        canonical_result(profiles, &assignments, k, 0, iterations, violations)
    }
}

/// Nearest centroid by squared Euclidean distance, ties to the lowest index.
fn assign(profiles: &[Hourly], centroids: &[Hourly]) -> Vec<usize> {
    profiles
        .iter()
        .map(|p| {
            let mut best = (0, f64::INFINITY);
            for (c, centroid) in centroids.iter().enumerate() {
                let d = squared_distance(p, centroid);
                if d < best.1 {
                    best = (c, d);
                }
            }
            best.0
        })
        .collect()
}

/// Gives every empty cluster the profile farthest from its own cluster mean.
///
/// Only clusters with two or more members give up a profile, so no new empty
/// cluster appears; the moved profile's old cluster loses at least its
/// squared distance from the cost, so WCSS cannot rise.
fn repair_empty_clusters(profiles: &[Hourly], assignments: &mut [usize], k: usize) {
    loop {
        let mut counts = vec![0usize; k];
        for &a in assignments.iter() {
            counts[a] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else { return };
        let means = cluster_means(profiles, assignments, k);
        let mut farthest: Option<(usize, f64)> = None;
        for (i, p) in profiles.iter().enumerate() {
            let a = assignments[i];
            if counts[a] < 2 {
                continue;
            }
            let d = squared_distance(p, means[a].as_ref().expect("nonempty"));
            if farthest.map_or(true, |(_, fd)| d > fd) {
                farthest = Some((i, d));
            }
        }
        match farthest {
            Some((i, _)) => assignments[i] = empty,
            // k <= distinct profiles <= n keeps a multi-member cluster around while any cluster is empty.
            None => unreachable!("empty cluster with no cluster to take from"),
        }
    }
}

fn distinct_indices(profiles: &[Hourly]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..profiles.len()).collect();
    order.sort_by(|&a, &b| lexicographic(&profiles[a], &profiles[b]).then(a.cmp(&b)));
    let mut firsts: Vec<usize> = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        if pos == 0 || lexicographic(&profiles[order[pos - 1]], &profiles[i]).is_ne() {
            firsts.push(i);
        }
    }
    firsts.sort_unstable();
    firsts
}

/// One Lloyd run with the default iteration cap.
pub fn kmeans_once(profiles: &[Hourly], k: usize, seed: u64) -> Result<ClusteringResult, ClusterError> {
    Ok(KMeansProblem::new(profiles, k)?.run(seed, KMeansConfig::DEFAULT_MAX_ITERATIONS))
}

/// Best of `config.restarts` Lloyd runs, executed serially.
pub fn kmeans_best(profiles: &[Hourly], config: &KMeansConfig) -> Result<ClusteringResult, ClusterError> {
    if config.restarts == 0 {
        return Err(ClusterError::ZeroRestarts);
    }
    let problem = KMeansProblem::new(profiles, config.k)?;
    Ok((0..config.restarts)
        .map(|r| problem.run_restart(config, r))
        .reduce(ClusteringResult::better)
        .expect("at least one restart"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::brute_force_optimum;
    use crate::HOURS;
    use rand_distr::{Distribution, Normal, Uniform};

    fn clouds(seed: u64) -> Vec<Hourly> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let jitter = Uniform::new_inclusive(-0.1, 0.1).unwrap();
        (0..10)
            .map(|i| {
                let base = if i < 5 { 0.0 } else { 10.0 };
                core::array::from_fn(|_| base + jitter.sample(&mut rng))
            })
            .collect()
    }

    fn random_instance(seed: u64, n: usize) -> Vec<Hourly> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, 1.0).unwrap();
        (0..n).map(|_| core::array::from_fn(|_| normal.sample(&mut rng))).collect()
    }

    #[test]
    fn run_from_matches_seeded_run_with_the_same_start() {
        let p = clouds(4);
        let problem = KMeansProblem::new(&p, 2).unwrap();
        let from = problem.run_from(&[0, 9], 100);
        assert_eq!(from.cluster_sizes(), [5, 5]);
        let seeded = problem.run(11, 100);
        assert_eq!(from.total_wcss, seeded.total_wcss);
    }

    #[test]
    fn k_one_is_global_mean() {
        let p = random_instance(1, 7);
        let r = kmeans_once(&p, 1, 3).unwrap();
        let mean: Hourly = core::array::from_fn(|h| p.iter().map(|x| x[h]).sum::<f64>() / 7.0);
        let sst: f64 = p.iter().map(|x| squared_distance(x, &mean)).sum();
        assert!(r.assignments.iter().all(|&a| a == 0));
        assert!((r.total_wcss - sst).abs() < 1e-9);
    }

    #[test]
    fn separated_clouds_split_exactly() {
        for seed in 0..20 {
            let p = clouds(seed);
            let r = kmeans_once(&p, 2, seed).unwrap();
            assert_eq!(r.assignments, vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1], "seed {seed}");
            let oracle = brute_force_optimum(&p, 2).unwrap();
            assert!((r.total_wcss - oracle.total_wcss).abs() < 1e-9);
        }
    }

    #[test]
    fn k_equals_n_saturates() {
        let p = random_instance(2, 6);
        let r = kmeans_once(&p, 6, 11).unwrap();
        assert_eq!(r.total_wcss, 0.0);
        let mut seen = r.assignments.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 6);
        for (i, &a) in r.assignments.iter().enumerate() {
            assert_eq!(r.centroids[a], p[i]);
        }
    }

    #[test]
    fn too_many_clusters_rejected() {
        let p = vec![[1.0; HOURS], [1.0; HOURS], [2.0; HOURS]];
        assert_eq!(kmeans_once(&p, 3, 0), Err(ClusterError::TooFewProfiles { k: 3, distinct: 2 }));
        assert_eq!(kmeans_once(&p, 0, 0), Err(ClusterError::ZeroK));
        assert!(kmeans_once(&p, 2, 0).is_ok());
    }

    #[test]
    fn single_restart_matches_once_with_derived_seed() {
        let p = random_instance(3, 9);
        let config = KMeansConfig::new(3).unwrap().with_restarts(1).unwrap().with_seed(42);
        let best = kmeans_best(&p, &config).unwrap();
        let once = kmeans_once(&p, 3, derive_seed(42, 0)).unwrap();
        assert_eq!(best, once);
    }

    #[test]
    fn best_is_deterministic() {
        let p = random_instance(4, 30);
        let config = KMeansConfig::new(4).unwrap().with_restarts(50).unwrap().with_seed(9);
        let a = kmeans_best(&p, &config).unwrap();
        let b = kmeans_best(&p, &config).unwrap();
        assert_eq!(a.assignments, b.assignments);
        assert_eq!(a.total_wcss.to_bits(), b.total_wcss.to_bits());
    }

    #[test]
    fn restart_order_does_not_matter() {
        let p = random_instance(5, 25);
        let config = KMeansConfig::new(3).unwrap().with_restarts(40).unwrap().with_seed(1);
        let problem = KMeansProblem::new(&p, 3).unwrap();
        let forward = kmeans_best(&p, &config).unwrap();
        let backward = (0..40).rev().map(|r| problem.run_restart(&config, r)).reduce(ClusteringResult::better).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn results_are_internally_consistent() {
        for seed in 0..30 {
            let p = random_instance(100 + seed, 20);
            let r = kmeans_once(&p, 4, seed).unwrap();
            assert!(r.cluster_sizes().iter().all(|&s| s > 0));
            let sum: f64 = r.per_cluster_wcss.iter().sum();
            assert!((sum - r.total_wcss).abs() < 1e-9);
            for c in 0..4 {
                let members = r.members(c);
                for (h, centroid) in r.centroids[c].iter().enumerate() {
                    let mean = members.iter().map(|&i| p[i][h]).sum::<f64>() / members.len() as f64;
                    assert!((mean - centroid).abs() < 1e-9);
                }
            }
            assert_eq!(r.monotonicity_violations, 0);
        }
    }

    #[test]
    fn duplicate_profiles_still_yield_k_clusters() {
        // Many copies of two points plus one outlier; Forgy picks distinct profiles only.
        let mut p = vec![[0.0; HOURS]; 6];
        p.extend(vec![[1.0; HOURS]; 6]);
        p.push([9.0; HOURS]);
        for seed in 0..50 {
            let r = kmeans_once(&p, 3, seed).unwrap();
            assert_eq!(r.cluster_sizes(), vec![6, 6, 1]);
            assert_eq!(r.total_wcss, 0.0);
        }
    }

    #[test]
    fn repair_fills_empty_cluster() {
        let p = [[0.0; HOURS], [1.0; HOURS], [5.0; HOURS], [6.0; HOURS]];
        let mut a = vec![0, 0, 0, 0];
        repair_empty_clusters(&p, &mut a, 2);
        // Mean is 3; profiles 0.0 and 6.0 tie as farthest and the lower index moves.
        assert_eq!(a, vec![1, 0, 0, 0]);
    }

    #[test]
    fn centroid_beats_any_member() {
        let p = random_instance(6, 15);
        let r = kmeans_once(&p, 3, 4).unwrap();
        for c in 0..3 {
            let members = r.members(c);
            let cost = |center: &Hourly| members.iter().map(|&i| squared_distance(&p[i], center)).sum::<f64>();
            for &m in &members {
                assert!(cost(&p[m]) >= r.per_cluster_wcss[c] - 1e-12);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn permutation_invariance(seed in any::<u64>(), n in 4usize..9, k in 1usize..4, shift in 1usize..8) {
                let p = random_instance(seed, n);
                let config = KMeansConfig::new(k).unwrap().with_restarts(300).unwrap().with_seed(seed);
                let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
                let permuted: Vec<Hourly> = perm.iter().map(|&i| p[i]).collect();
                let a = kmeans_best(&p, &config).unwrap();
                let b = kmeans_best(&permuted, &config.with_seed(seed ^ 0xABCD)).unwrap();
                prop_assert!((a.total_wcss - b.total_wcss).abs() < 1e-9);
                for (j, &i) in perm.iter().enumerate() {
                    prop_assert_eq!(b.assignments[j], a.assignments[i]);
                }
            }
        }
    }
}
