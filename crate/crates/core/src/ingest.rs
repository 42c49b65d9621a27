//! Property-day records, site-wide environment records and the reshaping
//! of hourly rows into them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::math::abs;
use crate::HOURS;

/// Tolerance under which two reports of the same weather value are the same value.
pub const ENVIRONMENT_AGREEMENT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IngestError {
    #[error("hour {hour} out of range 0..=23 for {property} on {date}")]
    HourOutOfRange { property: PropertyId, date: NaiveDate, hour: u8 },
    #[error("row for {found} passed while reshaping {expected}")]
    ForeignRow { expected: PropertyId, found: PropertyId },
    #[error("duplicate reading for {property} on {date} hour {hour}")]
    DuplicateHour { property: PropertyId, date: NaiveDate, hour: u8 },
    #[error("invalid reading {value} for {property} on {date} hour {hour}")]
    InvalidReading { property: PropertyId, date: NaiveDate, hour: usize, value: f64 },
    #[error("duplicate day record for {property} on {date}")]
    DuplicateDay { property: PropertyId, date: NaiveDate },
}

/// Opaque dwelling identifier, taken from the dwelling file name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PropertyId(String);

impl PropertyId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PropertyId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

/// A (property, date) pair identifying one day record.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DayKey {
    pub property_id: PropertyId,
    pub date: NaiveDate,
}

impl DayKey {
    pub fn new(property_id: PropertyId, date: NaiveDate) -> Self {
        Self { property_id, date }
    }
}

/// One line of a dwelling file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawHourRow {
    pub property_id: PropertyId,
    pub date: NaiveDate,
    pub hour: u8,
    pub kwh: Option<f64>,
    pub temperature: Option<f64>,
    pub wind_speed: Option<f64>,
    pub rainfall: Option<f64>,
}

/// Twenty-four hourly kWh slots for one property on one date.
///
/// A slot is `None` exactly when no valid reading exists for that hour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayRecord {
    property_id: PropertyId,
    date: NaiveDate,
    readings: [Option<f64>; HOURS],
}

impl DayRecord {
    pub fn new(
        property_id: PropertyId,
        date: NaiveDate,
        readings: [Option<f64>; HOURS],
    ) -> Result<Self, IngestError> {
        for (hour, value) in readings.iter().enumerate() {
            if let Some(v) = *value {
                if !v.is_finite() || v < 0.0 {
                    return Err(IngestError::InvalidReading { property: property_id, date, hour, value: v });
                }
            }
        }
        Ok(Self { property_id, date, readings })
    }

    /// Builds a fully populated day.
    pub fn complete(property_id: PropertyId, date: NaiveDate, values: crate::Hourly) -> Result<Self, IngestError> {
        Self::new(property_id, date, values.map(Some))
    }

    pub fn property_id(&self) -> &PropertyId {
        &self.property_id
    }

    pub fn date(&self) -> NaiveDate {
        self.date
    }

    pub fn key(&self) -> DayKey {
        DayKey::new(self.property_id.clone(), self.date)
    }

    pub fn readings(&self) -> &[Option<f64>; HOURS] {
        &self.readings
    }

    pub fn present_count(&self) -> usize {
        self.readings.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.present_count() == HOURS
    }

    /// The 24 values when every slot is present.
    pub fn values(&self) -> Option<crate::Hourly> {
        let mut out = [0.0; HOURS];
        for (slot, r) in out.iter_mut().zip(&self.readings) {
            *slot = (*r)?;
        }
        Some(out)
    }

    pub fn absent_hours(&self) -> impl Iterator<Item = usize> + '_ {
        self.readings.iter().enumerate().filter(|(_, r)| r.is_none()).map(|(h, _)| h)
    }
}

/// Site-wide hourly weather for one date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentRecord {
    pub date: NaiveDate,
    pub temperature: [Option<f64>; HOURS],
    pub wind_speed: [Option<f64>; HOURS],
    pub rainfall: [Option<f64>; HOURS],
}

impl EnvironmentRecord {
    pub fn empty(date: NaiveDate) -> Self {
        Self { date, temperature: [None; HOURS], wind_speed: [None; HOURS], rainfall: [None; HOURS] }
    }

    pub fn series(&self, field: WeatherField) -> &[Option<f64>; HOURS] {
        match field {
            WeatherField::Temperature => &self.temperature,
            WeatherField::WindSpeed => &self.wind_speed,
            WeatherField::Rainfall => &self.rainfall,
        }
    }

    fn series_mut(&mut self, field: WeatherField) -> &mut [Option<f64>; HOURS] {
        match field {
            WeatherField::Temperature => &mut self.temperature,
            WeatherField::WindSpeed => &mut self.wind_speed,
            WeatherField::Rainfall => &mut self.rainfall,
        }
    }

    /// Mean of the present hourly values of `field`, `None` when no hour is present.
    pub fn daily_mean(&self, field: WeatherField) -> Option<f64> {
        let present: Vec<f64> = self.series(field).iter().flatten().copied().collect();
        if present.is_empty() {
            None
        } else {
            Some(present.iter().sum::<f64>() / present.len() as f64)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeatherField {
    Temperature,
    WindSpeed,
    Rainfall,
}

impl WeatherField {
    pub const ALL: [WeatherField; 3] = [Self::Temperature, Self::WindSpeed, Self::Rainfall];

    pub fn name(self) -> &'static str {
        match self {
            Self::Temperature => "temperature",
            Self::WindSpeed => "wind_speed",
            Self::Rainfall => "rainfall",
        }
    }
}

/// Weather values of one property's file keyed by date and hour, awaiting merge.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnvironmentFragment {
    pub property_id: Option<PropertyId>,
    pub readings: BTreeMap<(NaiveDate, u8), [Option<f64>; 3]>,
}

/// Groups one property's hourly rows into day records, splitting off the weather columns.
pub fn reshape(
    rows: &[RawHourRow],
    property_id: &PropertyId,
) -> Result<(Vec<DayRecord>, EnvironmentFragment), IngestError> {
    let mut days: BTreeMap<NaiveDate, [Option<f64>; HOURS]> = BTreeMap::new();
    let mut seen: BTreeSet<(NaiveDate, u8)> = BTreeSet::new();
    let mut fragment = EnvironmentFragment { property_id: Some(property_id.clone()), ..Default::default() };

    for row in rows {
        if &row.property_id != property_id {
            return Err(IngestError::ForeignRow { expected: property_id.clone(), found: row.property_id.clone() });
        }
        if usize::from(row.hour) >= HOURS {
            return Err(IngestError::HourOutOfRange { property: property_id.clone(), date: row.date, hour: row.hour });
        }
        if !seen.insert((row.date, row.hour)) {
            return Err(IngestError::DuplicateHour { property: property_id.clone(), date: row.date, hour: row.hour });
        }
        days.entry(row.date).or_insert([None; HOURS])[usize::from(row.hour)] = row.kwh;
        let weather = [row.temperature, row.wind_speed, row.rainfall];
        if weather.iter().any(Option::is_some) {
            fragment.readings.insert((row.date, row.hour), weather);
        }
    }

    let records = days
        .into_iter()
        .map(|(date, readings)| DayRecord::new(property_id.clone(), date, readings))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((records, fragment))
}

/// A date+hour where properties reported different weather values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvironmentConflict {
    pub date: NaiveDate,
    pub hour: u8,
    pub field: WeatherField,
    pub reports: Vec<(Option<PropertyId>, f64)>,
    pub merged: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MergeReport {
    pub conflicts: Vec<EnvironmentConflict>,
}

/// Merges per-property weather fragments into one record per date.
///
/// Reports agreeing within [`ENVIRONMENT_AGREEMENT_TOLERANCE`] collapse to the
/// first report; otherwise the arithmetic mean is used and the hour flagged.
pub fn merge_environment(fragments: &[EnvironmentFragment]) -> (Vec<EnvironmentRecord>, MergeReport) {
    type Reports = Vec<(Option<PropertyId>, f64)>;
    let mut pooled: BTreeMap<(NaiveDate, u8, WeatherField), Reports> = BTreeMap::new();
    for fragment in fragments {
        for (&(date, hour), values) in &fragment.readings {
            for (field, value) in WeatherField::ALL.iter().zip(values) {
                if let Some(v) = value {
                    pooled.entry((date, hour, *field)).or_default().push((fragment.property_id.clone(), *v));
                }
            }
        }
    }

    let mut records: BTreeMap<NaiveDate, EnvironmentRecord> = BTreeMap::new();
    let mut report = MergeReport::default();
    for ((date, hour, field), reports) in pooled {
        let (lo, hi) = reports
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, v)| (lo.min(*v), hi.max(*v)));
        let merged = if abs(hi - lo) <= ENVIRONMENT_AGREEMENT_TOLERANCE {
            reports[0].1
        } else {
            let mean = reports.iter().map(|(_, v)| v).sum::<f64>() / reports.len() as f64;
            report.conflicts.push(EnvironmentConflict { date, hour, field, reports, merged: mean });
            mean
        };
        records.entry(date).or_insert_with(|| EnvironmentRecord::empty(date)).series_mut(field)[usize::from(hour)] =
            Some(merged);
    }
    (records.into_values().collect(), report)
}

/// All day records of a set of dwellings plus the shared environment.
///
/// Day records are kept sorted by (property, date); the set is immutable once built.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    days: Vec<DayRecord>,
    environment: BTreeMap<NaiveDate, EnvironmentRecord>,
    properties: BTreeSet<PropertyId>,
}

impl Dataset {
    pub fn new(
        mut days: Vec<DayRecord>,
        environment: impl IntoIterator<Item = EnvironmentRecord>,
    ) -> Result<Self, IngestError> {
        days.sort_by(|a, b| (&a.property_id, a.date).cmp(&(&b.property_id, b.date)));
        for pair in days.windows(2) {
            if pair[0].property_id == pair[1].property_id && pair[0].date == pair[1].date {
                return Err(IngestError::DuplicateDay { property: pair[0].property_id.clone(), date: pair[0].date });
            }
        }
        let properties = days.iter().map(|d| d.property_id.clone()).collect();
        let environment = environment.into_iter().map(|e| (e.date, e)).collect();
        Ok(Self { days, environment, properties })
    }

    /// A dataset with different day records but the same environment.
    pub fn with_days(&self, days: Vec<DayRecord>) -> Result<Self, IngestError> {
        Self::new(days, self.environment.values().cloned())
    }

    pub fn days(&self) -> &[DayRecord] {
        &self.days
    }

    /// Day records of one property, in date order.
    pub fn days_of(&self, property: &PropertyId) -> &[DayRecord] {
        let start = self.days.partition_point(|d| &d.property_id < property);
        let end = self.days.partition_point(|d| &d.property_id <= property);
        &self.days[start..end]
    }

    pub fn environment(&self, date: NaiveDate) -> Option<&EnvironmentRecord> {
        self.environment.get(&date)
    }

    pub fn environment_records(&self) -> impl Iterator<Item = &EnvironmentRecord> {
        self.environment.values()
    }

    pub fn property_ids(&self) -> &BTreeSet<PropertyId> {
        &self.properties
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }
}
