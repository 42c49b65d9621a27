//! Day-type labels from calendar rules and daily weather.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::ingest::{DayKey, Dataset, EnvironmentRecord, WeatherField};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DayTypeError {
    #[error("band list is empty")]
    EmptyBands,
    #[error("band bounds must be strictly increasing (band {0})")]
    BandsNotIncreasing(String),
    #[error("last band {0} must be unbounded")]
    LastBandBounded(String),
    #[error("scheme enables no axis")]
    NoAxis,
    #[error("no {field} data for {date}")]
    Unlabeled { date: NaiveDate, field: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DayClass {
    Weekday,
    Weekend,
    Holiday,
}

impl DayClass {
    pub fn name(self) -> &'static str {
        match self {
            Self::Weekday => "weekday",
            Self::Weekend => "weekend",
            Self::Holiday => "holiday",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "weekday" => Some(Self::Weekday),
            "weekend" => Some(Self::Weekend),
            "holiday" => Some(Self::Holiday),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Season {
    Winter,
    Spring,
    Summer,
    Autumn,
}

impl Season {
    pub fn name(self) -> &'static str {
        match self {
            Self::Winter => "winter",
            Self::Spring => "spring",
            Self::Summer => "summer",
            Self::Autumn => "autumn",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "winter" => Some(Self::Winter),
            "spring" => Some(Self::Spring),
            "summer" => Some(Self::Summer),
            "autumn" => Some(Self::Autumn),
            _ => None,
        }
    }

    /// Meteorological seasons: Dec-Feb winter, Mar-May spring, Jun-Aug summer, Sep-Nov autumn.
    pub const METEOROLOGICAL: [Season; 12] = [
        Self::Winter,
        Self::Winter,
        Self::Spring,
        Self::Spring,
        Self::Spring,
        Self::Summer,
        Self::Summer,
        Self::Summer,
        Self::Autumn,
        Self::Autumn,
        Self::Autumn,
        Self::Winter,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub name: String,
    /// Exclusive upper bound on the daily mean; infinite for the last band.
    pub upper: f64,
}

/// Ordered bands over a daily mean; the first band whose bound exceeds the value wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bands(Vec<Band>);

impl Bands {
    pub fn new(bands: Vec<Band>) -> Result<Self, DayTypeError> {
        let last = bands.last().ok_or(DayTypeError::EmptyBands)?;
        if last.upper != f64::INFINITY {
            return Err(DayTypeError::LastBandBounded(last.name.clone()));
        }
        for pair in bands.windows(2) {
            if pair[1].upper <= pair[0].upper {
                return Err(DayTypeError::BandsNotIncreasing(pair[1].name.clone()));
            }
        }
        Ok(Self(bands))
    }

    pub fn bands(&self) -> &[Band] {
        &self.0
    }

    pub fn classify(&self, value: f64) -> &str {
        self.0.iter().find(|b| value < b.upper).unwrap_or_else(|| self.0.last().expect("nonempty")).name.as_str()
    }

    /// cool(<10), mild(<15), hot.
    pub fn default_temperature() -> Self {
        Self::from_pairs(&[("cool", 10.0), ("mild", 15.0), ("hot", f64::INFINITY)])
    }

    /// calm(<5), windy.
    pub fn default_wind() -> Self {
        Self::from_pairs(&[("calm", 5.0), ("windy", f64::INFINITY)])
    }

    fn from_pairs(pairs: &[(&str, f64)]) -> Self {
        Self(pairs.iter().map(|&(name, upper)| Band { name: name.to_string(), upper }).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axes {
    pub day_class: bool,
    pub season: bool,
    pub temperature: bool,
    pub wind: bool,
}

impl Axes {
    pub const CALENDAR: Axes = Axes { day_class: true, season: true, temperature: false, wind: false };
    pub const DAY_CLASS: Axes = Axes { day_class: true, season: false, temperature: false, wind: false };
    pub const ALL: Axes = Axes { day_class: true, season: true, temperature: true, wind: true };

    pub fn any(&self) -> bool {
        self.day_class || self.season || self.temperature || self.wind
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayTypeScheme {
    pub weekend: BTreeSet<u32>,
    pub holidays: BTreeSet<NaiveDate>,
    pub seasons: [Season; 12],
    pub temperature_bands: Bands,
    pub wind_bands: Bands,
    axes: Axes,
}

impl DayTypeScheme {
    /// Saturday and Sunday (ISO weekdays 6 and 7) are weekend days by default.
    pub fn new(axes: Axes) -> Result<Self, DayTypeError> {
        if !axes.any() {
            return Err(DayTypeError::NoAxis);
        }
        Ok(Self {
            weekend: [6, 7].into_iter().collect(),
            holidays: BTreeSet::new(),
            seasons: Season::METEOROLOGICAL,
            temperature_bands: Bands::default_temperature(),
            wind_bands: Bands::default_wind(),
            axes,
        })
    }

    pub fn axes(&self) -> Axes {
        self.axes
    }

    pub fn set_axes(&mut self, axes: Axes) -> Result<(), DayTypeError> {
        if !axes.any() {
            return Err(DayTypeError::NoAxis);
        }
        self.axes = axes;
        Ok(())
    }

    pub fn with_holidays(mut self, holidays: impl IntoIterator<Item = NaiveDate>) -> Self {
        self.holidays.extend(holidays);
        self
    }

    fn day_class(&self, date: NaiveDate) -> DayClass {
        if self.holidays.contains(&date) {
            DayClass::Holiday
        } else if self.weekend.contains(&date.weekday().number_from_monday()) {
            DayClass::Weekend
        } else {
            DayClass::Weekday
        }
    }
}

/// Composite day type; an axis is `None` exactly when the scheme disables it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct DayTypeLabel {
    pub day_class: Option<DayClass>,
    pub season: Option<Season>,
    pub temperature_band: Option<String>,
    pub wind_band: Option<String>,
}

impl fmt::Display for DayTypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            self.day_class.map(DayClass::name),
            self.season.map(Season::name),
            self.temperature_band.as_deref(),
            self.wind_band.as_deref(),
        ];
        let mut first = true;
        for part in parts.into_iter().flatten() {
            if !first {
                f.write_str("/")?;
            }
            f.write_str(part)?;
            first = false;
        }
        if first {
            f.write_str("all")?;
        }
        Ok(())
    }
}

pub fn label_day(
    date: NaiveDate,
    environment: Option<&EnvironmentRecord>,
    scheme: &DayTypeScheme,
) -> Result<DayTypeLabel, DayTypeError> {
    let axes = scheme.axes;
    let band = |field: WeatherField, bands: &Bands| {
        environment
            .and_then(|e| e.daily_mean(field))
            .map(|mean| bands.classify(mean).to_string())
            .ok_or(DayTypeError::Unlabeled { date, field: field.name() })
    };
    Ok(DayTypeLabel {
        day_class: axes.day_class.then(|| scheme.day_class(date)),
        season: axes.season.then(|| scheme.seasons[date.month0() as usize]),
        temperature_band: if axes.temperature {
            Some(band(WeatherField::Temperature, &scheme.temperature_bands)?)
        } else {
            None
        },
        wind_band: if axes.wind { Some(band(WeatherField::WindSpeed, &scheme.wind_bands)?) } else { None },
    })
}

/// Label of every labelled day, keyed by (property, date).
pub type Labeling = BTreeMap<DayKey, DayTypeLabel>;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Partition {
    pub cells: BTreeMap<DayTypeLabel, BTreeSet<DayKey>>,
    /// Days that could not be labelled and were dropped.
    pub dropped: Vec<DayKey>,
}

impl Partition {
    pub fn labeling(&self) -> Labeling {
        self.cells.iter().flat_map(|(label, keys)| keys.iter().map(move |k| (k.clone(), label.clone()))).collect()
    }
}

/// Splits every day of `dataset` into disjoint day-type cells.
pub fn partition(dataset: &Dataset, scheme: &DayTypeScheme, drop_unlabelable: bool) -> Result<Partition, DayTypeError> {
    let mut out = Partition::default();
    // Labels depend only on the date, so each date is labelled once.
    let mut by_date: BTreeMap<NaiveDate, Result<DayTypeLabel, DayTypeError>> = BTreeMap::new();
    for day in dataset.days() {
        let label = by_date
            .entry(day.date())
            .or_insert_with(|| label_day(day.date(), dataset.environment(day.date()), scheme))
            .clone();
        match label {
            Ok(label) => {
                out.cells.entry(label).or_default().insert(day.key());
            }
            Err(_) if drop_unlabelable => out.dropped.push(day.key()),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn weekday_number(date: NaiveDate) -> u32 {
    date.weekday().number_from_monday()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::DayRecord;
    use crate::HOURS;
    use alloc::vec;

    fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn env_with_temperature(date: NaiveDate, values: &[f64]) -> EnvironmentRecord {
        let mut e = EnvironmentRecord::empty(date);
        for (slot, v) in e.temperature.iter_mut().zip(values) {
            *slot = Some(*v);
        }
        e
    }

    #[test]
    fn saturday_in_january() {
        let scheme = DayTypeScheme::new(Axes::CALENDAR).unwrap();
        let label = label_day(ymd(1990, 1, 6), None, &scheme).unwrap();
        assert_eq!(label.day_class, Some(DayClass::Weekend));
        assert_eq!(label.season, Some(Season::Winter));
        assert_eq!(label.temperature_band, None);
        assert_eq!(label.to_string(), "weekend/winter");
    }

    #[test]
    fn mean_sixteen_is_hot() {
        let scheme = DayTypeScheme::new(Axes { day_class: false, season: false, temperature: true, wind: false }).unwrap();
        let date = ymd(1990, 7, 4);
        let env = env_with_temperature(date, &[14.0, 18.0]);
        let label = label_day(date, Some(&env), &scheme).unwrap();
        assert_eq!(label.temperature_band.as_deref(), Some("hot"));
    }

    #[test]
    fn holiday_overrides_weekday() {
        let wednesday = ymd(1990, 12, 26);
        assert_eq!(weekday_number(wednesday), 3);
        let scheme = DayTypeScheme::new(Axes::DAY_CLASS).unwrap().with_holidays([wednesday]);
        assert_eq!(label_day(wednesday, None, &scheme).unwrap().day_class, Some(DayClass::Holiday));
    }

    #[test]
    fn missing_weather_is_unlabeled() {
        let scheme = DayTypeScheme::new(Axes::ALL).unwrap();
        let date = ymd(1990, 3, 1);
        assert!(matches!(label_day(date, None, &scheme), Err(DayTypeError::Unlabeled { .. })));
        let env = env_with_temperature(date, &[5.0]);
        assert!(matches!(label_day(date, Some(&env), &scheme), Err(DayTypeError::Unlabeled { field: "wind_speed", .. })));
    }

    #[test]
    fn band_validation() {
        let b = |n: &str, u| Band { name: n.into(), upper: u };
        assert!(Bands::new(vec![]).is_err());
        assert!(matches!(Bands::new(vec![b("a", 5.0)]), Err(DayTypeError::LastBandBounded(_))));
        assert!(matches!(
            Bands::new(vec![b("a", 5.0), b("b", 5.0), b("c", f64::INFINITY)]),
            Err(DayTypeError::BandsNotIncreasing(_))
        ));
        assert!(DayTypeScheme::new(Axes { day_class: false, season: false, temperature: false, wind: false }).is_err());
    }

    #[test]
    fn band_lookup_edges() {
        let t = Bands::default_temperature();
        assert_eq!(t.classify(9.999), "cool");
        assert_eq!(t.classify(10.0), "mild");
        assert_eq!(t.classify(15.0), "hot");
        assert_eq!(t.classify(-40.0), "cool");
    }

    fn fortnight() -> Dataset {
        // 1990-01-01 was a Monday.
        let days = (1..=14).map(|d| DayRecord::complete("p".into(), ymd(1990, 1, d), [1.0; HOURS]).unwrap()).collect();
        Dataset::new(days, []).unwrap()
    }

    #[test]
    fn fortnight_splits_ten_four() {
        let scheme = DayTypeScheme::new(Axes::DAY_CLASS).unwrap();
        let p = partition(&fortnight(), &scheme, false).unwrap();
        let weekday = DayTypeLabel { day_class: Some(DayClass::Weekday), ..Default::default() };
        let weekend = DayTypeLabel { day_class: Some(DayClass::Weekend), ..Default::default() };
        assert_eq!(p.cells[&weekday].len(), 10);
        assert_eq!(p.cells[&weekend].len(), 4);
    }

    #[test]
    fn second_axis_refines() {
        let days: Vec<_> = (0..400)
            .map(|i| DayRecord::complete("p".into(), ymd(1990, 1, 1) + chrono::Days::new(i), [1.0; HOURS]).unwrap())
            .collect();
        let ds = Dataset::new(days, []).unwrap();
        let coarse = partition(&ds, &DayTypeScheme::new(Axes::DAY_CLASS).unwrap(), false).unwrap();
        let fine = partition(&ds, &DayTypeScheme::new(Axes::CALENDAR).unwrap(), false).unwrap();
        assert!(fine.cells.len() > coarse.cells.len());
        for keys in fine.cells.values() {
            let parents = coarse.cells.values().filter(|c| keys.iter().any(|k| c.contains(k))).count();
            assert_eq!(parents, 1);
            assert!(coarse.cells.values().any(|c| keys.is_subset(c)));
        }
        let total: usize = fine.cells.values().map(BTreeSet::len).sum();
        assert_eq!(total, 400);
    }

    #[test]
    fn unlabelable_days_dropped_on_request() {
        let scheme = DayTypeScheme::new(Axes::ALL).unwrap();
        assert!(partition(&fortnight(), &scheme, false).is_err());
        let p = partition(&fortnight(), &scheme, true).unwrap();
        assert_eq!(p.dropped.len(), 14);
        assert!(p.cells.is_empty());
    }
}
