use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::lloyd::{kmeans_best, KMeansProblem};
use super::{ClusterError, ClusteringResult, KMeansConfig};
use crate::Hourly;

/// Second differences at or below this fraction of the largest WCSS count as flat.
const FLAT_TOLERANCE: f64 = 1e-12;

/// Inclusive range of cluster counts with at least one interior k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRange {
    pub k_min: usize,
    pub k_max: usize,
}

impl KRange {
    /// A range starting at k = 2 or later.
    pub fn new(k_min: usize, k_max: usize) -> Result<Self, ClusterError> {
        if k_min < 2 {
            return Err(ClusterError::InvalidRange { k_min, k_max, reason: "k_min must be at least 2" });
        }
        Self::allowing_one(k_min, k_max)
    }

    /// Like [`KRange::new`] but accepts k_min = 1.
    pub fn allowing_one(k_min: usize, k_max: usize) -> Result<Self, ClusterError> {
        if k_min == 0 {
            return Err(ClusterError::InvalidRange { k_min, k_max, reason: "k_min must be at least 1" });
        }
        if k_max < k_min + 2 {
            return Err(ClusterError::InvalidRange { k_min, k_max, reason: "need at least three cluster counts" });
        }
        Ok(Self { k_min, k_max })
    }

    pub fn len(&self) -> usize {
        self.k_max - self.k_min + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElbowEntry {
    pub k: usize,
    pub wcss: f64,
    /// k exceeded the number of distinct profiles, so the optimum is 0 without a run.
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElbowReport {
    pub entries: Vec<ElbowEntry>,
    /// `(k, wcss(k-1) - 2 wcss(k) + wcss(k+1))` for every interior k.
    pub second_differences: Vec<(usize, f64)>,
    pub suggested_k: usize,
    /// The curve has no bend: every second difference is (numerically) non-positive.
    pub degenerate: bool,
    /// Cluster counts whose best WCSS exceeds that of k - 1.
    pub non_monotone: Vec<usize>,
    pub monotonicity_violations: usize,
}

impl ElbowReport {
    /// Builds the report from an ascending, gap-free WCSS curve of at least three points.
    pub fn from_curve(entries: Vec<ElbowEntry>, monotonicity_violations: usize) -> Result<Self, ClusterError> {
        let (k_min, k_max) = match (entries.first(), entries.last()) {
            (Some(first), Some(last)) => (first.k, last.k),
            _ => return Err(ClusterError::InvalidRange { k_min: 0, k_max: 0, reason: "empty curve" }),
        };
        if entries.len() < 3 {
            return Err(ClusterError::InvalidRange { k_min, k_max, reason: "need at least three cluster counts" });
        }
        if entries.windows(2).any(|w| w[1].k != w[0].k + 1) {
            return Err(ClusterError::InvalidRange { k_min, k_max, reason: "cluster counts must be consecutive" });
        }
        let second_differences: Vec<(usize, f64)> =
            entries.windows(3).map(|w| (w[1].k, w[0].wcss - 2.0 * w[1].wcss + w[2].wcss)).collect();
        let (mut suggested_k, mut best) = second_differences[0];
        for &(k, d) in &second_differences[1..] {
            if d > best {
                (suggested_k, best) = (k, d);
            }
        }
        let scale = entries.iter().map(|e| e.wcss).fold(0.0, f64::max);
        let degenerate = best <= FLAT_TOLERANCE * scale;
        let non_monotone = entries.windows(2).filter(|w| w[1].wcss > w[0].wcss).map(|w| w[1].k).collect();
        Ok(Self { entries, second_differences, suggested_k, degenerate, non_monotone, monotonicity_violations })
    }

    pub fn wcss_at(&self, k: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.k == k).map(|e| e.wcss)
    }
}

/// Elbow scan using `best` to cluster at each k.
///
/// Cluster counts above the number of distinct profiles are recorded as
/// saturated with WCSS 0: placing every distinct profile in its own cluster is
/// optimal there and Forgy starts cannot be drawn.
pub fn elbow_scan_with<F>(profiles: &[Hourly], range: KRange, config: &KMeansConfig, mut best: F) -> Result<ElbowReport, ClusterError>
where
    F: FnMut(&KMeansConfig) -> Result<ClusteringResult, ClusterError>,
{
    if range.k_max > profiles.len() {
        return Err(ClusterError::InvalidRange {
            k_min: range.k_min,
            k_max: range.k_max,
            reason: "k_max exceeds the number of profiles",
        });
    }
    let distinct = KMeansProblem::new(profiles, 1)?.distinct_count();
    let mut entries = Vec::with_capacity(range.len());
    let mut violations = 0;
    for k in range.k_min..=range.k_max {
        if k > distinct {
            entries.push(ElbowEntry { k, wcss: 0.0, saturated: true });
            continue;
        }
        let result = best(&config.with_k(k)?)?;
        violations += result.monotonicity_violations;
        entries.push(ElbowEntry { k, wcss: result.total_wcss, saturated: false });
    }
    ElbowReport::from_curve(entries, violations)
}

/// Serial elbow scan with [`kmeans_best`] at every k.
pub fn elbow_scan(profiles: &[Hourly], range: KRange, config: &KMeansConfig) -> Result<ElbowReport, ClusterError> {
    elbow_scan_with(profiles, range, config, |c| kmeans_best(profiles, c))
}
