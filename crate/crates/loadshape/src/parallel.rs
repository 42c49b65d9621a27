//! Rayon-backed restarts. Results are identical to the serial functions in
//! [`loadshape_core::cluster`] for any thread count: restart `i` always uses
//! the same derived seed and the best-of reduction is order independent.

use loadshape_core::cluster::{
    elbow_scan_with, ClusterError, ClusteringResult, ElbowReport, KMeansConfig, KMeansProblem, KRange,
};
use loadshape_core::Hourly;
use rayon::prelude::*;

pub fn kmeans_best_parallel(profiles: &[Hourly], config: &KMeansConfig) -> Result<ClusteringResult, ClusterError> {
    if config.restarts == 0 {
        return Err(ClusterError::ZeroRestarts);
    }
    let problem = KMeansProblem::new(profiles, config.k)?;
    Ok((0..config.restarts)
        .into_par_iter()
        .map(|r| problem.run_restart(config, r))
        .reduce_with(ClusteringResult::better)
        .expect("at least one restart"))
}

pub fn elbow_scan_parallel(profiles: &[Hourly], range: KRange, config: &KMeansConfig) -> Result<ElbowReport, ClusterError> {
    elbow_scan_with(profiles, range, config, |c| kmeans_best_parallel(profiles, c))
}
