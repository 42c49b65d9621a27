use std::path::Path;

use loadshape_core::cluster::{ClusteringResult, ElbowEntry, ElbowReport, KMeansConfig};
use loadshape_core::profile::DayProfile;
use loadshape_core::Hourly;
use serde::{Deserialize, Serialize};

use super::{csv_err, csv_writer, line_of, parse_f64, read_json, write_json, FormatError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRef {
    pub id: String,
    pub label: String,
}

/// `clustering.json`: the configuration, the clustered profiles and the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringDocument {
    pub config: KMeansConfig,
    pub profiles: Vec<ProfileRef>,
    pub assignments: Vec<usize>,
    pub centroids: Vec<Hourly>,
    pub per_cluster_wcss: Vec<f64>,
    pub total_wcss: f64,
    pub winning_restart: usize,
    pub iterations_used: usize,
    pub monotonicity_violations: usize,
}

impl ClusteringDocument {
    pub fn new(config: KMeansConfig, profiles: &[DayProfile], result: &ClusteringResult) -> Self {
        Self {
            config,
            profiles: profiles
                .iter()
                .map(|p| ProfileRef { id: p.source().id.clone(), label: p.source().label.clone() })
                .collect(),
            assignments: result.assignments.clone(),
            centroids: result.centroids.clone(),
            per_cluster_wcss: result.per_cluster_wcss.clone(),
            total_wcss: result.total_wcss,
            winning_restart: result.winning_restart,
            iterations_used: result.iterations_used,
            monotonicity_violations: result.monotonicity_violations,
        }
    }

    pub fn result(&self) -> ClusteringResult {
        ClusteringResult {
            assignments: self.assignments.clone(),
            centroids: self.centroids.clone(),
            per_cluster_wcss: self.per_cluster_wcss.clone(),
            total_wcss: self.total_wcss,
            winning_restart: self.winning_restart,
            iterations_used: self.iterations_used,
            monotonicity_violations: self.monotonicity_violations,
        }
    }
}

pub fn write_clustering(path: &Path, doc: &ClusteringDocument) -> Result<(), FormatError> {
    write_json(path, doc)
}

pub fn read_clustering(path: &Path) -> Result<ClusteringDocument, FormatError> {
    let doc: ClusteringDocument = read_json(path)?;
    let k = doc.centroids.len();
    if doc.assignments.len() != doc.profiles.len() || doc.per_cluster_wcss.len() != k || doc.assignments.iter().any(|&a| a >= k) {
        return Err(FormatError::invalid(path, None, "assignments, profiles and centroids are inconsistent"));
    }
    Ok(doc)
}

/// `id,label,cluster` with clusters named `cluster1`.. as in the plots.
pub fn write_assignments(path: &Path, doc: &ClusteringDocument) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(["id", "label", "cluster"]).map_err(csv_err(path))?;
    for (p, a) in doc.profiles.iter().zip(&doc.assignments) {
        w.write_record([p.id.as_str(), &p.label, &format!("cluster{}", a + 1)]).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

const ELBOW_HEADER: [&str; 3] = ["k", "wcss", "second_difference"];
const SUGGESTED: &str = "suggested_k";

/// `k,wcss,second_difference` per k (empty at the ends), then `suggested_k,<k>,`.
pub fn write_elbow(path: &Path, report: &ElbowReport) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(ELBOW_HEADER).map_err(csv_err(path))?;
    for e in &report.entries {
        let d2 = report.second_differences.iter().find(|(k, _)| *k == e.k).map_or_else(String::new, |(_, d)| d.to_string());
        w.write_record([e.k.to_string(), e.wcss.to_string(), d2]).map_err(csv_err(path))?;
    }
    w.write_record([SUGGESTED.to_string(), report.suggested_k.to_string(), String::new()]).map_err(csv_err(path))?;
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// Rebuilds the report from the curve and checks the recorded suggestion.
///
/// Saturation flags and violation counts are not part of the CSV and read
/// back as `false` and 0.
pub fn read_elbow(path: &Path) -> Result<ElbowReport, FormatError> {
    let mut r = super::csv_reader(path)?;
    super::expect_header(path, &mut r, &ELBOW_HEADER.map(String::from))?;
    let mut entries = Vec::new();
    let mut suggested = None;
    for record in r.records() {
        let record = record.map_err(csv_err(path))?;
        let bad = |what: &str| FormatError::invalid(path, line_of(&record), format!("bad {what}"));
        if &record[0] == SUGGESTED {
            suggested = Some(record[1].parse::<usize>().map_err(|_| bad("suggested k"))?);
            continue;
        }
        let k = record[0].parse::<usize>().map_err(|_| bad("k"))?;
        entries.push(ElbowEntry { k, wcss: parse_f64(path, &record, 1)?, saturated: false });
    }
    let report = ElbowReport::from_curve(entries, 0).map_err(|e| FormatError::invalid(path, None, e))?;
    match suggested {
        Some(k) if k == report.suggested_k => Ok(report),
        Some(k) => Err(FormatError::invalid(path, None, format!("recorded suggested_k {k} disagrees with the curve ({})", report.suggested_k))),
        None => Err(FormatError::invalid(path, None, "missing suggested_k line")),
    }
}
