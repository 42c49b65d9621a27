//! Plot data for cluster panels, elbow curves and reference overlays.
//!
//! Everything here produces [`PlotBundle`]s: plain series of numbers. File
//! formats (CSV twins and SVG drawn from them) live in the std crate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cluster::{ClusteringResult, ElbowReport};
use crate::profile::{distance, DayProfile, ProfileError, ProfileSource, SimilarityMode, Units};
use crate::{Hourly, HOURS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportError {
    #[error("series {name}: {reason}")]
    InvalidSeries { name: String, reason: &'static str },
    #[error("{assignments} assignments for {profiles} profiles")]
    LengthMismatch { assignments: usize, profiles: usize },
    #[error("assignment {cluster} refers to one of only {centroids} centroids")]
    MissingCentroid { cluster: usize, centroids: usize },
    #[error("an elbow plot needs at least 3 entries, got {0}")]
    TooFewEntries(usize),
    #[error("reference profile {name}: {reason}")]
    InvalidReference { name: String, reason: String },
    #[error("reference set is empty")]
    NoReferences,
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotRole {
    Member,
    Centroid,
    Reference,
    /// Line of an elbow plot.
    Curve,
    /// Highlighted point(s), such as the suggested k.
    Marker,
}

impl PlotRole {
    pub fn name(self) -> &'static str {
        match self {
            Self::Member => "member",
            Self::Centroid => "centroid",
            Self::Reference => "reference",
            Self::Curve => "curve",
            Self::Marker => "marker",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Member, Self::Centroid, Self::Reference, Self::Curve, Self::Marker].into_iter().find(|r| r.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    name: String,
    role: PlotRole,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PlotSeries {
    /// Checks that `x` is strictly increasing, both axes are finite and `|x| = |y| > 0`.
    pub fn new(name: impl Into<String>, role: PlotRole, x: Vec<f64>, y: Vec<f64>) -> Result<Self, ReportError> {
        let name = name.into();
        let bad = |reason| Err(ReportError::InvalidSeries { name: name.clone(), reason });
        if x.len() != y.len() {
            return bad("x and y lengths differ");
        }
        if x.is_empty() {
            return bad("no points");
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return bad("non-finite value");
        }
        if x.windows(2).any(|w| w[0] >= w[1]) {
            return bad("x is not strictly increasing");
        }
        Ok(Self { name, role, x, y })
    }

    /// A series over hours 0..23.
    pub fn hourly(name: impl Into<String>, role: PlotRole, values: &Hourly) -> Result<Self, ReportError> {
        Self::new(name, role, hour_axis(), values.to_vec())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role(&self) -> PlotRole {
        self.role
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }
}

fn hour_axis() -> Vec<f64> {
    (0..HOURS).map(|h| h as f64).collect()
}

/// One figure: its series plus free-text annotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotBundle {
    /// File-name friendly panel name, e.g. `cluster1` or `elbow`.
    pub name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<PlotSeries>,
    pub annotations: Vec<String>,
}

impl PlotBundle {
    pub fn new(name: impl Into<String>, title: impl Into<String>, x_label: &str, y_label: &str) -> Self {
        Self {
            name: name.into(),
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            annotations: Vec::new(),
        }
    }

    pub fn series_with_role(&self, role: PlotRole) -> impl Iterator<Item = &PlotSeries> {
        self.series.iter().filter(move |s| s.role == role)
    }
}

fn series_name(source: &ProfileSource) -> String {
    if source.label == crate::profile::ALL_DAYS_LABEL {
        source.id.clone()
    } else {
        format!("{}/{}", source.id, source.label)
    }
}

/// One panel per cluster with every member profile and the centroid.
///
/// Panels are named `cluster1`..`clusterK` in canonical cluster order.
pub fn render_cluster_panels(result: &ClusteringResult, profiles: &[DayProfile]) -> Result<Vec<PlotBundle>, ReportError> {
    if result.assignments.len() != profiles.len() {
        return Err(ReportError::LengthMismatch { assignments: result.assignments.len(), profiles: profiles.len() });
    }
    let k = result.k();
    let mut panels: Vec<PlotBundle> = (1..=k)
        .map(|c| PlotBundle::new(format!("cluster{c}"), format!("Cluster {c}"), "hour", "kWh"))
        .collect();
    for (profile, &cluster) in profiles.iter().zip(&result.assignments) {
        let panel = panels.get_mut(cluster).ok_or(ReportError::MissingCentroid { cluster, centroids: k })?;
        panel.series.push(PlotSeries::hourly(series_name(profile.source()), PlotRole::Member, profile.values())?);
    }
    for (c, (panel, centroid)) in panels.iter_mut().zip(&result.centroids).enumerate() {
        let members = panel.series.len();
        panel.series.push(PlotSeries::hourly("centroid", PlotRole::Centroid, centroid)?);
        panel.annotations.push(format!("{members} members, WCSS {}", result.per_cluster_wcss[c]));
    }
    Ok(panels)
}

/// WCSS against k with the suggested k marked.
pub fn render_elbow(report: &ElbowReport) -> Result<PlotBundle, ReportError> {
    if report.entries.len() < 3 {
        return Err(ReportError::TooFewEntries(report.entries.len()));
    }
    let mut bundle = PlotBundle::new("elbow", "Within-cluster sum of squares by cluster count", "k", "WCSS");
    let x = report.entries.iter().map(|e| e.k as f64).collect();
    let y = report.entries.iter().map(|e| e.wcss).collect();
    bundle.series.push(PlotSeries::new("wcss", PlotRole::Curve, x, y)?);
    let at = report.wcss_at(report.suggested_k).unwrap_or(0.0);
    bundle.series.push(PlotSeries::new("suggested_k", PlotRole::Marker, [report.suggested_k as f64].into(), [at].into())?);
    bundle.annotations.push(format!("suggested k = {}", report.suggested_k));
    if report.degenerate {
        bundle.annotations.push("degenerate curve: no clear elbow".into());
    }
    if !report.non_monotone.is_empty() {
        bundle.annotations.push(format!("WCSS rises at k = {:?}", report.non_monotone));
    }
    Ok(bundle)
}

/// A named hourly (24) or half-hourly (48) profile supplied by the user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceProfile {
    name: String,
    points: Vec<f64>,
}

impl ReferenceProfile {
    pub fn new(name: impl Into<String>, points: Vec<f64>) -> Result<Self, ReportError> {
        let name = name.into();
        let bad = |reason: String| Err(ReportError::InvalidReference { name: name.clone(), reason });
        if points.len() != HOURS && points.len() != 2 * HOURS {
            return bad(format!("{} points, expected 24 or 48", points.len()));
        }
        if let Some((i, v)) = points.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return bad(format!("point {i} is {v}"));
        }
        Ok(Self { name, points })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Hourly values; half-hourly points are averaged in consecutive pairs.
    pub fn hourly(&self) -> Hourly {
        if self.points.len() == HOURS {
            core::array::from_fn(|h| self.points[h])
        } else {
            core::array::from_fn(|h| (self.points[2 * h] + self.points[2 * h + 1]) / 2.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceProfileSet {
    profiles: Vec<ReferenceProfile>,
}

impl ReferenceProfileSet {
    pub fn new(profiles: Vec<ReferenceProfile>) -> Result<Self, ReportError> {
        if profiles.is_empty() {
            return Err(ReportError::NoReferences);
        }
        for (i, p) in profiles.iter().enumerate() {
            if profiles[..i].iter().any(|q| q.name == p.name) {
                return Err(ReportError::InvalidReference { name: p.name.clone(), reason: "duplicate name".into() });
            }
        }
        Ok(Self { profiles })
    }

    pub fn profiles(&self) -> &[ReferenceProfile] {
        &self.profiles
    }
}

/// Shape distance between centroid `centroid` (0-based) and reference `reference`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayDistance {
    pub centroid: usize,
    pub reference: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub bundle: PlotBundle,
    /// Centroid-major: all references for centroid 0, then centroid 1, ...
    pub distances: Vec<OverlayDistance>,
}

/// Overlays centroids and references as unit-sum shapes and tabulates their
/// shape-mode distances.
pub fn overlay_reference(centroids: &[Hourly], refs: &ReferenceProfileSet) -> Result<Overlay, ReportError> {
    let to_shape = |name: String, values: Hourly| -> Result<DayProfile, ReportError> {
        let p = DayProfile::new(values, Units::Kwh, ProfileSource::new(name, crate::profile::ALL_DAYS_LABEL))?;
        Ok(crate::profile::normalize(&p)?)
    };
    let centroid_shapes = centroids
        .iter()
        .enumerate()
        .map(|(c, v)| to_shape(format!("cluster{}", c + 1), *v))
        .collect::<Result<Vec<_>, _>>()?;
    let reference_shapes = refs
        .profiles
        .iter()
        .map(|r| to_shape(r.name.clone(), r.hourly()))
        .collect::<Result<Vec<_>, _>>()?;

    let mut bundle = PlotBundle::new("overlay", "Cluster centroids against reference profiles", "hour", "share of daily total");
    for s in &centroid_shapes {
        bundle.series.push(PlotSeries::hourly(s.source().id.as_str(), PlotRole::Centroid, s.values())?);
    }
    for s in &reference_shapes {
        bundle.series.push(PlotSeries::hourly(s.source().id.as_str(), PlotRole::Reference, s.values())?);
    }
    let mut distances = Vec::with_capacity(centroid_shapes.len() * reference_shapes.len());
    for (c, cs) in centroid_shapes.iter().enumerate() {
        for (r, rs) in refs.profiles.iter().zip(&reference_shapes) {
            distances.push(OverlayDistance {
                centroid: c,
                reference: r.name.clone(),
                distance: distance(cs, rs, SimilarityMode::Shape)?,
            });
        }
    }
    Ok(Overlay { bundle, distances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{ElbowEntry, ElbowReport};
    use alloc::vec;

    fn result(assignments: Vec<usize>, centroids: Vec<Hourly>) -> ClusteringResult {
        let k = centroids.len();
        ClusteringResult {
            assignments,
            centroids,
            per_cluster_wcss: vec![0.0; k],
            total_wcss: 0.0,
            winning_restart: 0,
            iterations_used: 1,
            monotonicity_violations: 0,
        }
    }

    fn kwh(id: &str, v: Hourly) -> DayProfile {
        DayProfile::kwh(v, ProfileSource::new(id, "all")).unwrap()
    }

    #[test]
    fn series_validation() {
        assert!(PlotSeries::new("s", PlotRole::Curve, vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(PlotSeries::new("s", PlotRole::Curve, vec![1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(PlotSeries::new("s", PlotRole::Curve, vec![], vec![]).is_err());
        assert!(PlotSeries::new("s", PlotRole::Curve, vec![0.0, f64::NAN], vec![1.0, 2.0]).is_err());
        assert!(PlotSeries::new("s", PlotRole::Curve, vec![0.0, 0.5], vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn role_names_round_trip() {
        for r in [PlotRole::Member, PlotRole::Centroid, PlotRole::Reference, PlotRole::Curve, PlotRole::Marker] {
            assert_eq!(PlotRole::parse(r.name()), Some(r));
        }
    }

    #[test]
    fn one_panel_per_cluster() {
        let profiles: Vec<_> = (0..8).map(|i| kwh(&format!("p{i}"), [i as f64; HOURS])).collect();
        let r = result((0..8).map(|i| i % 4).collect(), (0..4).map(|c| [c as f64 + 2.0; HOURS]).collect());
        let panels = render_cluster_panels(&r, &profiles).unwrap();
        assert_eq!(panels.len(), 4);
        assert_eq!(panels[3].name, "cluster4");
        for p in &panels {
            assert_eq!(p.series_with_role(PlotRole::Member).count(), 2);
            assert_eq!(p.series_with_role(PlotRole::Centroid).count(), 1);
        }
    }

    #[test]
    fn singleton_panel_member_equals_centroid() {
        let v: Hourly = core::array::from_fn(|h| h as f64);
        let r = result(vec![0], vec![v]);
        let panels = render_cluster_panels(&r, &[kwh("solo", v)]).unwrap();
        assert_eq!(panels[0].series[0].y(), panels[0].series[1].y());
        assert_eq!(panels[0].series[0].name(), "solo");
    }

    #[test]
    fn panels_reject_mismatch() {
        let r = result(vec![0, 0], vec![[0.0; HOURS]]);
        assert!(matches!(render_cluster_panels(&r, &[kwh("a", [0.0; HOURS])]), Err(ReportError::LengthMismatch { .. })));
        let r = result(vec![3], vec![[0.0; HOURS]]);
        assert!(matches!(render_cluster_panels(&r, &[kwh("a", [0.0; HOURS])]), Err(ReportError::MissingCentroid { .. })));
    }

    fn elbow(ws: &[f64]) -> ElbowReport {
        let entries = ws.iter().enumerate().map(|(i, &w)| ElbowEntry { k: i + 2, wcss: w, saturated: false }).collect();
        ElbowReport::from_curve(entries, 0).unwrap()
    }

    #[test]
    fn elbow_curve_and_marker() {
        let r = elbow(&[200.0, 120.0, 40.0, 35.0, 31.0, 28.0, 26.0, 25.0, 24.5]);
        let b = render_elbow(&r).unwrap();
        let curve = b.series_with_role(PlotRole::Curve).next().unwrap();
        assert_eq!(curve.x().len(), 9);
        let marker = b.series_with_role(PlotRole::Marker).next().unwrap();
        assert_eq!(marker.x(), &[4.0]);
        assert_eq!(marker.y(), &[40.0]);
        assert!(!b.annotations.iter().any(|a| a.contains("degenerate")));
    }

    #[test]
    fn flat_elbow_is_annotated() {
        let b = render_elbow(&elbow(&[0.0; 9])).unwrap();
        assert!(b.annotations.iter().any(|a| a.contains("degenerate")));
    }

    #[test]
    fn short_elbow_rejected() {
        let mut r = elbow(&[3.0, 2.0, 1.0]);
        r.entries.pop();
        assert_eq!(render_elbow(&r), Err(ReportError::TooFewEntries(2)));
    }

    #[test]
    fn half_hourly_reference_resamples_pairwise() {
        let points: Vec<f64> = (0..48).map(|i| i as f64).collect();
        let r = ReferenceProfile::new("hh", points).unwrap();
        let h = r.hourly();
        assert_eq!(h[0], 0.5);
        assert_eq!(h[23], 46.5);
        assert!(ReferenceProfile::new("bad", vec![1.0; 30]).is_err());
        assert!(ReferenceProfile::new("neg", vec![-1.0; 24]).is_err());
    }

    #[test]
    fn reference_set_validation() {
        assert_eq!(ReferenceProfileSet::new(vec![]), Err(ReportError::NoReferences));
        let a = ReferenceProfile::new("a", vec![1.0; 24]).unwrap();
        assert!(ReferenceProfileSet::new(vec![a.clone(), a]).is_err());
    }

    #[test]
    fn centroid_against_itself_is_zero() {
        let c: Hourly = core::array::from_fn(|h| 1.0 + (h % 6) as f64);
        let refs = ReferenceProfileSet::new(vec![ReferenceProfile::new("self", c.to_vec()).unwrap()]).unwrap();
        let o = overlay_reference(&[c], &refs).unwrap();
        assert_eq!(o.distances.len(), 1);
        assert!(o.distances[0].distance < 1e-15);
        assert_eq!(o.bundle.series.len(), 2);
    }

    #[test]
    fn overlay_distances_symmetric() {
        let a: Hourly = core::array::from_fn(|h| 1.0 + h as f64);
        let b: Hourly = core::array::from_fn(|h| 30.0 - h as f64);
        let set = |v: Hourly| ReferenceProfileSet::new(vec![ReferenceProfile::new("r", v.to_vec()).unwrap()]).unwrap();
        let ab = overlay_reference(&[a], &set(b)).unwrap().distances[0].distance;
        let ba = overlay_reference(&[b], &set(a)).unwrap().distances[0].distance;
        assert_eq!(ab, ba);
        assert!(ab > 0.0);
    }

    #[test]
    fn zero_reference_cannot_be_compared() {
        let refs = ReferenceProfileSet::new(vec![ReferenceProfile::new("z", vec![0.0; 24]).unwrap()]).unwrap();
        assert!(matches!(overlay_reference(&[[1.0; HOURS]], &refs), Err(ReportError::Profile(_))));
    }
}
