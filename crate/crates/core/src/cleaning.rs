//! Valid/error day classification, hourly average tables and
//! fraction-of-average imputation of missing hours.
//!
//! A day is valid when all 24 hours carry a reading. A day with gaps is
//! repaired by comparing its present hours with the property's average
//! day: the ratio of the observed total to the average total over those
//! same hours is the day's *fraction*, and every missing hour is filled
//! with `fraction * average[hour]`. With day-type conditioning the average
//! comes from days of the same type, falling back to the property-wide
//! average when that cell has no data. Outliers pass through untouched.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::daytype::{DayTypeLabel, Labeling};
use crate::ingest::{DayRecord, Dataset, IngestError, PropertyId};
use crate::HOURS;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CleaningError {
    #[error("dataset has no day records")]
    EmptyDataset,
    #[error("{property} {date}: no hour present, day cannot be imputed")]
    NotImputable { property: PropertyId, date: NaiveDate },
    #[error("{property} {date}: average readings over the present hours sum to zero")]
    DegenerateAverage { property: PropertyId, date: NaiveDate },
    #[error("{property} {date}: present readings sum to zero, fraction would not be positive")]
    ZeroObserved { property: PropertyId, date: NaiveDate },
    #[error("no average profile for {property} ({condition})")]
    MissingAverages { property: PropertyId, condition: String },
    #[error(transparent)]
    Dataset(#[from] IngestError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyValidity {
    pub property_id: PropertyId,
    pub valid_days: usize,
    pub error_days: usize,
}

impl PropertyValidity {
    pub fn total_days(&self) -> usize {
        self.valid_days + self.error_days
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

impl CountStats {
    fn of(counts: impl Iterator<Item = usize> + Clone) -> Self {
        let n = counts.clone().count();
        let sum: usize = counts.clone().sum();
        Self {
            min: counts.clone().min().unwrap_or(0),
            max: counts.max().unwrap_or(0),
            mean: if n == 0 { 0.0 } else { sum as f64 / n as f64 },
        }
    }
}

/// Per-property and global counts of valid and error days.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub per_property: Vec<PropertyValidity>,
    pub valid: CountStats,
    pub all: CountStats,
    pub total_valid_rows: usize,
    pub total_error_rows: usize,
}

impl ValidityReport {
    fn from_counts(counts: BTreeMap<PropertyId, (usize, usize)>) -> Self {
        let per_property: Vec<PropertyValidity> = counts
            .into_iter()
            .map(|(property_id, (valid_days, error_days))| PropertyValidity { property_id, valid_days, error_days })
            .collect();
        Self {
            valid: CountStats::of(per_property.iter().map(|p| p.valid_days)),
            all: CountStats::of(per_property.iter().map(PropertyValidity::total_days)),
            total_valid_rows: per_property.iter().map(|p| p.valid_days).sum(),
            total_error_rows: per_property.iter().map(|p| p.error_days).sum(),
            per_property,
        }
    }
}

/// Readings-per-property table, means to one decimal place.
impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<16}{:>42}{:>42}{:>39}",
            "",
            "Minimum number of readings per property",
            "Maximum number of readings per property",
            "Mean number of readings per property"
        )?;
        for (name, stats) in [("Valid readings", &self.valid), ("All readings", &self.all)] {
            writeln!(f, "{:<16}{:>42}{:>42}{:>39.1}", name, stats.min, stats.max, stats.mean)?;
        }
        write!(
            f,
            "{} properties, {} fully populated rows, {} rows with errors",
            self.per_property.len(),
            self.total_valid_rows,
            self.total_error_rows
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValiditySplit {
    pub valid: Vec<DayRecord>,
    pub errors: Vec<DayRecord>,
    pub report: ValidityReport,
}

/// Separates complete days from days with at least one missing hour.
pub fn split_valid(dataset: &Dataset) -> Result<ValiditySplit, CleaningError> {
    if dataset.is_empty() {
        return Err(CleaningError::EmptyDataset);
    }
    let mut counts: BTreeMap<PropertyId, (usize, usize)> = BTreeMap::new();
    let (mut valid, mut errors) = (Vec::new(), Vec::new());
    for day in dataset.days() {
        let entry = counts.entry(day.property_id().clone()).or_default();
        if day.is_complete() {
            entry.0 += 1;
            valid.push(day.clone());
        } else {
            entry.1 += 1;
            errors.push(day.clone());
        }
    }
    Ok(ValiditySplit { valid, errors, report: ValidityReport::from_counts(counts) })
}

/// Which days an average is taken over.
#[derive(Debug, Clone, Copy)]
pub enum Conditioning<'a> {
    None,
    DayType(&'a Labeling),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlyAverage {
    /// Mean per hour; `None` when no reading contributed.
    pub means: [Option<f64>; HOURS],
    pub days: usize,
}

/// Mean reading per hour for each (property, optional day type) cell.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HourlyAverageTable {
    entries: BTreeMap<(PropertyId, Option<DayTypeLabel>), HourlyAverage>,
}

impl HourlyAverageTable {
    pub fn get(&self, property: &PropertyId, label: Option<&DayTypeLabel>) -> Option<&HourlyAverage> {
        self.entries.get(&(property.clone(), label.cloned()))
    }

    pub fn extend(&mut self, other: HourlyAverageTable) {
        self.entries.extend(other.entries);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(PropertyId, Option<DayTypeLabel>), &HourlyAverage)> {
        self.entries.iter()
    }
}

/// Averages the valid days of each property, optionally split by day type.
///
/// With day-type conditioning, days missing from the labeling are skipped.
pub fn build_average_table(dataset: &Dataset, conditioning: Conditioning<'_>) -> HourlyAverageTable {
    // Per hour sums and counts, plus the number of days.
    type Sums = ([f64; HOURS], [usize; HOURS], usize);
    let mut sums: BTreeMap<(PropertyId, Option<DayTypeLabel>), Sums> = BTreeMap::new();
    for day in dataset.days().iter().filter(|d| d.is_complete()) {
        let label = match conditioning {
            Conditioning::None => None,
            Conditioning::DayType(labels) => match labels.get(&day.key()) {
                Some(l) => Some(l.clone()),
                None => continue,
            },
        };
        let (sum, count, days) = sums.entry((day.property_id().clone(), label)).or_insert(([0.0; HOURS], [0; HOURS], 0));
        *days += 1;
        for (h, r) in day.readings().iter().enumerate() {
            if let Some(v) = r {
                sum[h] += v;
                count[h] += 1;
            }
        }
    }
    let entries = sums
        .into_iter()
        .map(|(key, (sum, count, days))| {
            let mut means = [None; HOURS];
            for h in 0..HOURS {
                if count[h] > 0 {
                    means[h] = Some(sum[h] / count[h] as f64);
                }
            }
            (key, HourlyAverage { means, days })
        })
        .collect();
    HourlyAverageTable { entries }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImputationMethod {
    Unconditioned,
    DayTypeConditioned,
}

impl ImputationMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Unconditioned => "unconditioned",
            Self::DayTypeConditioned => "day_type_conditioned",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "unconditioned" => Some(Self::Unconditioned),
            "day_type_conditioned" => Some(Self::DayTypeConditioned),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImputationOutcome {
    pub day: DayRecord,
    pub fraction: f64,
    pub filled_hours: BTreeSet<usize>,
    pub method: ImputationMethod,
}

/// Fills the absent hours of `day` from the property's average day.
///
/// `fraction = sum(present readings) / sum(average at the same hours)` and each
/// absent hour `h` becomes `fraction * average[h]`. Present slots are copied
/// unchanged.
pub fn impute_day(
    day: &DayRecord,
    table: &HourlyAverageTable,
    label: Option<&DayTypeLabel>,
) -> Result<ImputationOutcome, CleaningError> {
    let property = day.property_id();
    let err_ctx = || (property.clone(), day.date());
    if day.present_count() == 0 {
        let (property, date) = err_ctx();
        return Err(CleaningError::NotImputable { property, date });
    }
    let missing = || CleaningError::MissingAverages {
        property: property.clone(),
        condition: label.map_or_else(|| String::from("all days"), |l| alloc::format!("{l}")),
    };
    let average = table.get(property, label).ok_or_else(missing)?;
    let mut means = [0.0; HOURS];
    for (slot, m) in means.iter_mut().zip(&average.means) {
        *slot = m.ok_or_else(missing)?;
    }

    let (mut observed, mut expected) = (0.0, 0.0);
    for (r, m) in day.readings().iter().zip(&means) {
        if let Some(v) = r {
            observed += v;
            expected += m;
        }
    }
    if expected <= 0.0 {
        let (property, date) = err_ctx();
        return Err(CleaningError::DegenerateAverage { property, date });
    }
    if observed <= 0.0 {
        let (property, date) = err_ctx();
        return Err(CleaningError::ZeroObserved { property, date });
    }
    let fraction = observed / expected;

    let mut readings = *day.readings();
    let mut filled_hours = BTreeSet::new();
    for (h, slot) in readings.iter_mut().enumerate() {
        if slot.is_none() {
            *slot = Some(fraction * means[h]);
            filled_hours.insert(h);
        }
    }
    Ok(ImputationOutcome {
        day: DayRecord::new(property.clone(), day.date(), readings)?,
        fraction,
        filled_hours,
        method: if label.is_some() { ImputationMethod::DayTypeConditioned } else { ImputationMethod::Unconditioned },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CleaningPolicy {
    Omit,
    Impute,
    ImputeByDayType,
}

/// One row of the imputation log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputationLogEntry {
    pub property_id: PropertyId,
    pub date: NaiveDate,
    pub method: ImputationMethod,
    pub fraction: f64,
    pub filled_hours: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CleaningNote {
    /// Day dropped because it could not be repaired.
    Dropped { property_id: PropertyId, date: NaiveDate, reason: String },
    /// No usable day-type average; the property-wide average was used.
    FellBack { property_id: PropertyId, date: NaiveDate, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CleanOutcome {
    pub dataset: Dataset,
    pub report: ValidityReport,
    pub log: Vec<ImputationLogEntry>,
    pub notes: Vec<CleaningNote>,
}

/// Applies a cleaning policy. Per-day failures are noted, never fatal.
pub fn clean(dataset: &Dataset, policy: CleaningPolicy, labels: Option<&Labeling>) -> Result<CleanOutcome, CleaningError> {
    let split = split_valid(dataset)?;
    let mut log = Vec::new();
    let mut notes = Vec::new();
    let mut kept = split.valid;

    if policy != CleaningPolicy::Omit {
        let mut table = build_average_table(dataset, Conditioning::None);
        let labels = if policy == CleaningPolicy::ImputeByDayType { labels } else { None };
        if let Some(labels) = labels {
            table.extend(build_average_table(dataset, Conditioning::DayType(labels)));
        }
        for day in &split.errors {
            let drop = |reason: String| CleaningNote::Dropped {
                property_id: day.property_id().clone(),
                date: day.date(),
                reason,
            };
            let attempt = match labels.map(|l| l.get(&day.key())) {
                Some(Some(label)) => match impute_day(day, &table, Some(label)) {
                    Err(e @ CleaningError::MissingAverages { .. }) => {
                        notes.push(CleaningNote::FellBack {
                            property_id: day.property_id().clone(),
                            date: day.date(),
                            reason: alloc::format!("{e}"),
                        });
                        impute_day(day, &table, None)
                    }
                    other => other,
                },
                Some(None) => {
                    notes.push(CleaningNote::FellBack {
                        property_id: day.property_id().clone(),
                        date: day.date(),
                        reason: String::from("day has no day-type label"),
                    });
                    impute_day(day, &table, None)
                }
                None => impute_day(day, &table, None),
            };
            match attempt {
                Ok(outcome) => {
                    log.push(ImputationLogEntry {
                        property_id: day.property_id().clone(),
                        date: day.date(),
                        method: outcome.method,
                        fraction: outcome.fraction,
                        filled_hours: outcome.filled_hours.iter().copied().collect(),
                    });
                    kept.push(outcome.day);
                }
                Err(e) => notes.push(drop(alloc::format!("{e}"))),
            }
        }
    }

    Ok(CleanOutcome { dataset: dataset.with_days(kept)?, report: split.report, log, notes })
}
