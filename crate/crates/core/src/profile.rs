//! Representative daily profiles, normalisation and distances.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::daytype::{DayTypeLabel, Labeling};
use crate::ingest::{DayRecord, Dataset, PropertyId};
use crate::math::{abs, sqrt, squared_distance};
use crate::{Hourly, HOURS};

/// Tolerance on the unit sum of a shape profile.
pub const SHAPE_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error("no days to average")]
    Empty,
    #[error("day {date} of {property} is incomplete")]
    IncompleteDay { property: PropertyId, date: chrono::NaiveDate },
    #[error("profile values must be finite and non-negative (hour {hour}: {value})")]
    InvalidValue { hour: usize, value: f64 },
    #[error("shape profile sums to {0}, not 1")]
    NotNormalized(f64),
    #[error("profile {0} sums to zero and has no shape")]
    ZeroProfile(String),
    #[error("amplitude distance needs two kWh profiles")]
    UnitMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    Kwh,
    Shape,
}

impl Units {
    pub fn name(self) -> &'static str {
        match self {
            Self::Kwh => "kwh",
            Self::Shape => "shape",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "kwh" => Some(Self::Kwh),
            "shape" => Some(Self::Shape),
            _ => None,
        }
    }
}

/// What a profile stands for: an id (property or cluster) and the day set averaged.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProfileSource {
    pub id: String,
    pub label: String,
}

impl ProfileSource {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        Self { id: id.into(), label: label.into() }
    }
}

/// 24 non-negative hourly values, either kWh or a unit-sum shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayProfile {
    values: Hourly,
    units: Units,
    source: ProfileSource,
}

impl DayProfile {
    pub fn new(values: Hourly, units: Units, source: ProfileSource) -> Result<Self, ProfileError> {
        for (hour, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(ProfileError::InvalidValue { hour, value });
            }
        }
        if units == Units::Shape {
            let sum: f64 = values.iter().sum();
            if abs(sum - 1.0) > SHAPE_SUM_TOLERANCE {
                return Err(ProfileError::NotNormalized(sum));
            }
        }
        Ok(Self { values, units, source })
    }

    pub fn kwh(values: Hourly, source: ProfileSource) -> Result<Self, ProfileError> {
        Self::new(values, Units::Kwh, source)
    }

    pub fn values(&self) -> &Hourly {
        &self.values
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn source(&self) -> &ProfileSource {
        &self.source
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self, ProfileError> {
        Self::new(self.values.map(|v| v * factor), Units::Kwh, self.source.clone())
    }
}

/// Per-hour mean over a nonempty set of complete days.
pub fn average_profile<'a>(
    days: impl IntoIterator<Item = &'a DayRecord>,
    source: ProfileSource,
) -> Result<DayProfile, ProfileError> {
    let mut sum = [0.0; HOURS];
    let mut n = 0usize;
    for day in days {
        let values = day
            .values()
            .ok_or_else(|| ProfileError::IncompleteDay { property: day.property_id().clone(), date: day.date() })?;
        for (s, v) in sum.iter_mut().zip(values) {
            *s += v;
        }
        n += 1;
    }
    if n == 0 {
        return Err(ProfileError::Empty);
    }
    DayProfile::kwh(sum.map(|s| s / n as f64), source)
}

/// Divides every value by the daily total.
pub fn normalize(profile: &DayProfile) -> Result<DayProfile, ProfileError> {
    let total = profile.total();
    if total <= 0.0 {
        return Err(ProfileError::ZeroProfile(format!("{}/{}", profile.source.id, profile.source.label)));
    }
    DayProfile::new(profile.values.map(|v| v / total), Units::Shape, profile.source.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityMode {
    /// Raw kWh: households using more electricity are far apart.
    #[default]
    Amplitude,
    /// Sum-normalised values: only the timing of use matters.
    Shape,
}

impl SimilarityMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Amplitude => "amplitude",
            Self::Shape => "shape",
        }
    }
}

/// Euclidean distance under the given mode.
pub fn distance(a: &DayProfile, b: &DayProfile, mode: SimilarityMode) -> Result<f64, ProfileError> {
    match mode {
        SimilarityMode::Amplitude => {
            if a.units != Units::Kwh || b.units != Units::Kwh {
                return Err(ProfileError::UnitMismatch);
            }
            Ok(sqrt(squared_distance(&a.values, &b.values)))
        }
        SimilarityMode::Shape => {
            let (a, b) = (normalize(a)?, normalize(b)?);
            Ok(sqrt(squared_distance(&a.values, &b.values)))
        }
    }
}

/// Index of the profile in `set` closest to `query`; ties go to the lowest index.
pub fn nearest(query: &DayProfile, set: &[DayProfile], mode: SimilarityMode) -> Result<Option<usize>, ProfileError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in set.iter().enumerate() {
        let d = distance(query, p, mode)?;
        if best.map_or(true, |(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    Ok(best.map(|(i, _)| i))
}

#[derive(Debug, Clone, Copy)]
pub enum Grouping<'a> {
    PerProperty,
    PerPropertyAndLabel(&'a Labeling),
}

/// Label recorded for profiles averaged over all of a property's days.
pub const ALL_DAYS_LABEL: &str = "all";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedCell {
    pub id: PropertyId,
    pub label: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileMatrix {
    pub profiles: Vec<DayProfile>,
    pub dropped: Vec<DroppedCell>,
}

impl ProfileMatrix {
    pub fn rows(&self) -> Vec<Hourly> {
        self.profiles.iter().map(|p| p.values).collect()
    }
}

/// One profile per grouping cell, ordered by (property, label).
///
/// Only complete days contribute. Cells without any, and zero-total cells in
/// shape mode, are dropped and listed.
pub fn profile_matrix(dataset: &Dataset, grouping: Grouping<'_>, mode: SimilarityMode) -> ProfileMatrix {
    let mut cells: BTreeMap<(PropertyId, Option<DayTypeLabel>), Vec<&DayRecord>> = BTreeMap::new();
    for day in dataset.days() {
        let label = match grouping {
            Grouping::PerProperty => None,
            Grouping::PerPropertyAndLabel(labels) => match labels.get(&day.key()) {
                Some(l) => Some(l.clone()),
                None => continue,
            },
        };
        let cell = cells.entry((day.property_id().clone(), label)).or_default();
        if day.is_complete() {
            cell.push(day);
        }
    }

    let mut out = ProfileMatrix::default();
    for ((property, label), days) in cells {
        let label = label.map_or_else(|| String::from(ALL_DAYS_LABEL), |l| format!("{l}"));
        let drop = |reason: String| DroppedCell { id: property.clone(), label: label.clone(), reason };
        let source = ProfileSource::new(property.as_str(), label.as_str());
        let profile = average_profile(days.iter().copied(), source).and_then(|p| match mode {
            SimilarityMode::Amplitude => Ok(p),
            SimilarityMode::Shape => normalize(&p),
        });
        match profile {
            Ok(p) => out.profiles.push(p),
            Err(e) => out.dropped.push(drop(format!("{e}"))),
        }
    }
    out
}
