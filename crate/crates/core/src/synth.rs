//! Synthetic households with a known cluster structure.
//!
//! Each property belongs to one archetype. Its day readings are
//! `amplitude * shape + N(0, noise_sigma)` clamped at zero, and some days
//! lose a fixed number of hours. The [`GroundTruthLedger`] records what was
//! planted so that clusterings can be scored with [`score_recovery`].
//!
//! Random streams, all derived from `spec.seed` with [`derive_seed`]:
//! stream 0 shuffles archetype membership over property ids, stream 1 drives
//! the weather and stream `i + 2` drives property `i`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use chrono::{Datelike, Days, NaiveDate};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::cluster::ClusteringResult;
use crate::ingest::{DayRecord, Dataset, EnvironmentRecord, IngestError, PropertyId};
use crate::{derive_seed, Hourly, HOURS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("at least one archetype is required")]
    NoArchetypes,
    #[error("archetype {name}: {reason}")]
    InvalidArchetype { name: String, reason: &'static str },
    #[error("noise sigma must be finite and non-negative, got {0}")]
    InvalidNoise(f64),
    #[error("masking fractions must lie in [0, 1)")]
    InvalidMasking,
    #[error("the date span must cover at least one day")]
    NoDays,
    #[error("date span runs past the calendar")]
    DateOverflow,
    #[error("invalid weather model: {0}")]
    InvalidWeather(&'static str),
    #[error("{assignments} assignments for {ids} profile ids")]
    LengthMismatch { assignments: usize, ids: usize },
    #[error("profile id {0} is not in the ledger")]
    UnknownProperty(String),
    #[error("ledger property {0} has no profile")]
    Uncovered(String),
    #[error(transparent)]
    Dataset(#[from] IngestError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Archetype {
    pub name: String,
    /// Non-negative base shape; amplitudes multiply it directly.
    pub shape: Hourly,
    /// Inclusive range each member's amplitude is drawn from uniformly.
    pub amplitude: (f64, f64),
    pub members: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Masking {
    /// Share of the 24 hours blanked on a corrupted day, rounded up.
    pub hour_fraction: f64,
    /// Probability that a day is corrupted.
    pub day_fraction: f64,
}

impl Masking {
    pub const NONE: Masking = Masking { hour_fraction: 0.0, day_fraction: 0.0 };

    /// Hours blanked on each corrupted day.
    pub fn hours_per_day(&self) -> usize {
        if self.hour_fraction <= 0.0 {
            0
        } else {
            (libm::ceil(self.hour_fraction * HOURS as f64) as usize).min(HOURS - 1)
        }
    }
}

/// Site weather: sinusoidal annual and diurnal temperature, uniform wind,
/// and rain on a random share of hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeatherModel {
    pub mean_temperature: f64,
    /// Half the summer/winter swing; the warmest day is mid-July.
    pub annual_amplitude: f64,
    /// Half the day/night swing; the warmest hour is 15:00.
    pub diurnal_amplitude: f64,
    pub max_wind: f64,
    pub rain_probability: f64,
    pub max_rain: f64,
}

impl Default for WeatherModel {
    fn default() -> Self {
        Self {
            mean_temperature: 10.0,
            annual_amplitude: 7.0,
            diurnal_amplitude: 3.0,
            max_wind: 12.0,
            rain_probability: 0.1,
            max_rain: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub archetypes: Vec<Archetype>,
    /// Standard deviation of the per-reading noise, in kWh.
    pub noise_sigma: f64,
    pub masking: Masking,
    pub start: NaiveDate,
    pub days: usize,
    pub weather: WeatherModel,
    pub seed: u64,
}

/// Evening peak, typical of households without an off-peak tariff.
const EVENING: Hourly = [
    0.30, 0.25, 0.22, 0.20, 0.20, 0.22, 0.35, 0.55, 0.50, 0.38, 0.35, 0.36, //
    0.40, 0.36, 0.34, 0.40, 0.60, 0.85, 1.00, 0.95, 0.82, 0.65, 0.48, 0.36,
];
/// Night storage heating with little daytime use; the three night
/// archetypes share it and differ only by a disjoint daytime block.
const NIGHT_BASE: Hourly = [
    1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 0.60, 0.15, 0.15, 0.15, 0.15, 0.15, //
    0.15, 0.15, 0.15, 0.15, 0.15, 0.15, 0.15, 0.15, 0.15, 0.15, 0.15, 0.60,
];

/// [`NIGHT_BASE`] plus 0.6 over the four hours from `from`.
const fn night_with_block(from: usize) -> Hourly {
    let mut shape = NIGHT_BASE;
    let mut h = from;
    while h < from + 4 {
        shape[h] += 0.6;
        h += 1;
    }
    shape
}

/// Relative noise of the default spec, as a share of the mean amplitude.
pub const DEFAULT_RELATIVE_NOISE: f64 = 0.05;

impl Default for SynthSpec {
    /// 93 properties in four archetypes of 48, 15, 15 and 15 members over 1990.
    fn default() -> Self {
        let archetype = |name: &str, shape, amplitude, members| Archetype { name: name.into(), shape, amplitude, members };
        let mut spec = Self {
            archetypes: vec![
                archetype("evening", EVENING, (1.0, 1.4), 48),
                archetype("night_morning", night_with_block(8), (2.2, 2.8), 15),
                archetype("night_afternoon", night_with_block(12), (2.2, 2.8), 15),
                archetype("night_evening", night_with_block(17), (2.2, 2.8), 15),
            ],
            noise_sigma: 0.0,
            masking: Masking { hour_fraction: 0.25, day_fraction: 0.05 },
            start: NaiveDate::from_ymd_opt(1990, 1, 1).expect("valid date"),
            days: 365,
            weather: WeatherModel::default(),
            seed: 0,
        };
        spec.noise_sigma = DEFAULT_RELATIVE_NOISE * spec.mean_amplitude();
        spec
    }
}

impl SynthSpec {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Sets the noise to `fraction` of [`SynthSpec::mean_amplitude`].
    pub fn with_relative_noise(mut self, fraction: f64) -> Self {
        self.noise_sigma = fraction * self.mean_amplitude();
        self
    }

    /// Membership-weighted mean of the amplitude range midpoints.
    pub fn mean_amplitude(&self) -> f64 {
        let members: usize = self.archetypes.iter().map(|a| a.members).sum();
        if members == 0 {
            return 0.0;
        }
        let total: f64 = self.archetypes.iter().map(|a| a.members as f64 * (a.amplitude.0 + a.amplitude.1) / 2.0).sum();
        total / members as f64
    }

    pub fn property_count(&self) -> usize {
        self.archetypes.iter().map(|a| a.members).sum()
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.archetypes.is_empty() {
            return Err(SynthError::NoArchetypes);
        }
        for (i, a) in self.archetypes.iter().enumerate() {
            let bad = |reason| Err(SynthError::InvalidArchetype { name: a.name.clone(), reason });
            if a.members == 0 {
                return bad("needs at least one member");
            }
            if a.shape.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return bad("shape values must be finite and non-negative");
            }
            let (lo, hi) = a.amplitude;
            if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
                return bad("amplitude range must satisfy 0 <= low <= high");
            }
            if self.archetypes[..i].iter().any(|b| b.name == a.name) {
                return bad("duplicate name");
            }
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return Err(SynthError::InvalidNoise(self.noise_sigma));
        }
        let fraction_ok = |f: f64| (0.0..1.0).contains(&f);
        if !fraction_ok(self.masking.hour_fraction) || !fraction_ok(self.masking.day_fraction) {
            return Err(SynthError::InvalidMasking);
        }
        if self.days == 0 {
            return Err(SynthError::NoDays);
        }
        self.start.checked_add_days(Days::new(self.days as u64 - 1)).ok_or(SynthError::DateOverflow)?;
        let w = &self.weather;
        if [w.mean_temperature, w.annual_amplitude, w.diurnal_amplitude, w.max_wind, w.max_rain].iter().any(|v| !v.is_finite()) {
            return Err(SynthError::InvalidWeather("values must be finite"));
        }
        if w.max_wind < 0.0 || w.max_rain < 0.0 {
            return Err(SynthError::InvalidWeather("wind and rain maxima must be non-negative"));
        }
        if !(0.0..=1.0).contains(&w.rain_probability) {
            return Err(SynthError::InvalidWeather("rain probability must lie in [0, 1]"));
        }
        Ok(())
    }

    fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        (0..self.days as u64).map(|d| self.start + Days::new(d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MaskedCell {
    pub date: NaiveDate,
    pub hour: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueDay {
    pub date: NaiveDate,
    /// Readings after noise and before masking.
    pub readings: Hourly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyTruth {
    pub property_id: PropertyId,
    /// Index into [`GroundTruthLedger::archetypes`].
    pub archetype: usize,
    pub amplitude: f64,
    pub days: Vec<TrueDay>,
    pub masked: Vec<MaskedCell>,
    /// Per-hour mean of the true readings over all days.
    pub hourly_means: Hourly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthLedger {
    pub seed: u64,
    pub archetypes: Vec<String>,
    pub properties: Vec<PropertyTruth>,
}

impl GroundTruthLedger {
    pub fn archetype_of(&self, property: &PropertyId) -> Option<usize> {
        self.properties.iter().find(|p| &p.property_id == property).map(|p| p.archetype)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub dataset: Dataset,
    pub ledger: GroundTruthLedger,
}

/// Property ids `h001`, `h002`, ... wide enough for `count`.
fn property_ids(count: usize) -> Vec<PropertyId> {
    let width = format!("{count}").len().max(3);
    (1..=count).map(|i| PropertyId::new(format!("h{i:0width$}"))).collect()
}

fn weather(spec: &SynthSpec) -> Vec<EnvironmentRecord> {
    use core::f64::consts::PI;
    let w = &spec.weather;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, 1));
    spec.dates()
        .map(|date| {
            let annual = libm::cos(2.0 * PI * (date.ordinal0() as f64 - 195.0) / 365.25);
            let mut record = EnvironmentRecord::empty(date);
            for h in 0..HOURS {
                let diurnal = libm::cos(2.0 * PI * (h as f64 - 15.0) / HOURS as f64);
                record.temperature[h] = Some(w.mean_temperature + w.annual_amplitude * annual + w.diurnal_amplitude * diurnal);
                record.wind_speed[h] = Some(w.max_wind * rng.random::<f64>());
                let rain = rng.random::<f64>() < w.rain_probability;
                let amount = w.max_rain * rng.random::<f64>();
                record.rainfall[h] = Some(if rain { amount } else { 0.0 });
            }
            record
        })
        .collect()
}

/// Generates the dataset and its ledger. Deterministic in `spec`.
pub fn generate(spec: &SynthSpec) -> Result<SynthOutput, SynthError> {
    spec.validate()?;
    let ids = property_ids(spec.property_count());
    let mut membership: Vec<usize> =
        spec.archetypes.iter().enumerate().flat_map(|(a, arch)| core::iter::repeat(a).take(arch.members)).collect();
    membership.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, 0)));

    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|_| SynthError::InvalidNoise(spec.noise_sigma))?;
    let masked_hours = spec.masking.hours_per_day();
    let mut days = Vec::with_capacity(ids.len() * spec.days);
    let mut properties = Vec::with_capacity(ids.len());
    for (i, (id, &a)) in ids.iter().zip(&membership).enumerate() {
        let archetype = &spec.archetypes[a];
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, i as u64 + 2));
        let (lo, hi) = archetype.amplitude;
        let amplitude = if lo == hi { lo } else { rng.random_range(lo..=hi) };
        let mut truth = PropertyTruth {
            property_id: id.clone(),
            archetype: a,
            amplitude,
            days: Vec::with_capacity(spec.days),
            masked: Vec::new(),
            hourly_means: [0.0; HOURS],
        };
        for date in spec.dates() {
            let readings: Hourly = core::array::from_fn(|h| {
                let clean = amplitude * archetype.shape[h];
                if spec.noise_sigma == 0.0 {
                    clean
                } else {
                    (clean + noise.sample(&mut rng)).max(0.0)
                }
            });
            let mut observed = readings.map(Some);
            if masked_hours > 0 && rng.random::<f64>() < spec.masking.day_fraction {
                let mut hours = index::sample(&mut rng, HOURS, masked_hours).into_vec();
                hours.sort_unstable();
                for h in hours {
                    observed[h] = None;
                    truth.masked.push(MaskedCell { date, hour: h });
                }
            }
            days.push(DayRecord::new(id.clone(), date, observed)?);
            truth.days.push(TrueDay { date, readings });
        }
        let mut sums = [0.0; HOURS];
        for d in &truth.days {
            for (s, v) in sums.iter_mut().zip(&d.readings) {
                *s += v;
            }
        }
        truth.hourly_means = sums.map(|s| s / spec.days as f64);
        properties.push(truth);
    }
    let dataset = Dataset::new(days, weather(spec))?;
    let ledger = GroundTruthLedger {
        seed: spec.seed,
        archetypes: spec.archetypes.iter().map(|a| a.name.clone()).collect(),
        properties,
    };
    Ok(SynthOutput { dataset, ledger })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryScore {
    pub purity: f64,
    pub rand_index: f64,
}

/// Share of items whose cluster's majority class is their own class.
///
/// Both slices must have equal length; an empty input scores 1.
pub fn purity(predicted: &[usize], truth: &[usize]) -> f64 {
    assert_eq!(predicted.len(), truth.len(), "label slices differ in length");
    if predicted.is_empty() {
        return 1.0;
    }
    let mut table: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for (&p, &t) in predicted.iter().zip(truth) {
        *table.entry(p).or_default().entry(t).or_default() += 1;
    }
    let majority: usize = table.values().map(|row| row.values().copied().max().unwrap_or(0)).sum();
    majority as f64 / predicted.len() as f64
}

/// Share of item pairs on which the two labelings agree (same/same or
/// different/different), from the contingency table. Fewer than two items score 1.
pub fn rand_index(predicted: &[usize], truth: &[usize]) -> f64 {
    assert_eq!(predicted.len(), truth.len(), "label slices differ in length");
    let n = predicted.len() as u128;
    if n < 2 {
        return 1.0;
    }
    let pairs = |c: u128| c * c.saturating_sub(1) / 2;
    let mut cells: BTreeMap<(usize, usize), u128> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u128> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u128> = BTreeMap::new();
    for (&p, &t) in predicted.iter().zip(truth) {
        *cells.entry((p, t)).or_default() += 1;
        *rows.entry(p).or_default() += 1;
        *cols.entry(t).or_default() += 1;
    }
    let both: u128 = cells.values().map(|&c| pairs(c)).sum();
    let same_pred: u128 = rows.values().map(|&c| pairs(c)).sum();
    let same_truth: u128 = cols.values().map(|&c| pairs(c)).sum();
    let total = pairs(n);
    let agree = total + 2 * both - same_pred - same_truth;
    agree as f64 / total as f64
}

/// Scores a clustering of profiles whose ids name ledger properties.
///
/// Every id must be in the ledger and every ledger property must appear.
pub fn score_recovery(
    result: &ClusteringResult,
    profile_ids: &[PropertyId],
    ledger: &GroundTruthLedger,
) -> Result<RecoveryScore, SynthError> {
    if result.assignments.len() != profile_ids.len() {
        return Err(SynthError::LengthMismatch { assignments: result.assignments.len(), ids: profile_ids.len() });
    }
    let archetypes: BTreeMap<&PropertyId, usize> = ledger.properties.iter().map(|p| (&p.property_id, p.archetype)).collect();
    let truth = profile_ids
        .iter()
        .map(|id| archetypes.get(id).copied().ok_or_else(|| SynthError::UnknownProperty(id.as_str().into())))
        .collect::<Result<Vec<_>, _>>()?;
    let covered: BTreeSet<&PropertyId> = profile_ids.iter().collect();
    if let Some(missing) = archetypes.keys().find(|id| !covered.contains(*id)) {
        return Err(SynthError::Uncovered(missing.as_str().into()));
    }
    Ok(RecoveryScore { purity: purity(&result.assignments, &truth), rand_index: rand_index(&result.assignments, &truth) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{average_profile, ProfileSource};

    fn small(seed: u64) -> SynthSpec {
        let mut spec = SynthSpec::default().with_seed(seed);
        spec.days = 20;
        spec
    }

    #[test]
    fn default_population() {
        let spec = SynthSpec::default();
        assert_eq!(spec.property_count(), 93);
        assert_eq!(spec.archetypes.iter().map(|a| a.members).collect::<Vec<_>>(), vec![48, 15, 15, 15]);
        let expected = (48.0 * 1.2 + 45.0 * 2.5) / 93.0;
        assert!((spec.mean_amplitude() - expected).abs() < 1e-12);
        assert!((spec.noise_sigma - 0.05 * expected).abs() < 1e-12);
    }

    #[test]
    fn memberships_set_property_count() {
        let mut spec = small(1);
        for (a, m) in spec.archetypes.iter_mut().zip([10, 15, 20, 48]) {
            a.members = m;
        }
        let out = generate(&spec).unwrap();
        assert_eq!(out.dataset.property_ids().len(), 93);
        assert_eq!(out.ledger.properties.len(), 93);
        assert_eq!(out.ledger.properties[0].property_id.as_str(), "h001");
    }

    #[test]
    fn noiseless_unmasked_days_are_exact() {
        let mut spec = small(4).with_relative_noise(0.0);
        spec.masking = Masking::NONE;
        let out = generate(&spec).unwrap();
        for truth in &out.ledger.properties {
            let shape = spec.archetypes[truth.archetype].shape;
            let expected = shape.map(|v| truth.amplitude * v);
            let days = out.dataset.days_of(&truth.property_id);
            assert_eq!(days.len(), spec.days);
            for d in days {
                assert_eq!(d.values().unwrap(), expected);
            }
            let avg = average_profile(days, ProfileSource::new("p", "all")).unwrap();
            for (a, e) in avg.values().iter().zip(&expected) {
                assert!((a - e).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn ledger_masks_match_absent_slots() {
        let mut spec = small(9);
        spec.masking = Masking { hour_fraction: 0.3, day_fraction: 0.4 };
        let out = generate(&spec).unwrap();
        let mut total = 0;
        for truth in &out.ledger.properties {
            let recorded: BTreeSet<MaskedCell> = truth.masked.iter().copied().collect();
            let absent: BTreeSet<MaskedCell> = out
                .dataset
                .days_of(&truth.property_id)
                .iter()
                .flat_map(|d| d.absent_hours().map(move |hour| MaskedCell { date: d.date(), hour }))
                .collect();
            assert_eq!(recorded, absent);
            total += recorded.len();
            for (day, t) in out.dataset.days_of(&truth.property_id).iter().zip(&truth.days) {
                for (r, v) in day.readings().iter().zip(&t.readings) {
                    if let Some(r) = r {
                        assert_eq!(r, v);
                    }
                }
            }
        }
        assert!(total > 0);
        assert_eq!(total % spec.masking.hours_per_day(), 0);
    }

    #[test]
    fn readings_stay_non_negative_under_heavy_noise() {
        let mut spec = small(2);
        spec.noise_sigma = 5.0;
        let out = generate(&spec).unwrap();
        assert!(out.dataset.days().iter().flat_map(|d| d.readings().iter().flatten()).all(|v| *v >= 0.0));
    }

    #[test]
    fn same_seed_same_output() {
        assert_eq!(generate(&small(7)).unwrap(), generate(&small(7)).unwrap());
        assert_ne!(generate(&small(7)).unwrap().ledger, generate(&small(8)).unwrap().ledger);
    }

    #[test]
    fn weather_covers_every_date() {
        let out = generate(&small(3)).unwrap();
        assert_eq!(out.dataset.environment_records().count(), 20);
        let jan = out.dataset.environment_records().next().unwrap();
        assert!(jan.temperature.iter().all(|t| t.unwrap() < 10.0));
    }

    #[test]
    fn masked_hour_counts() {
        assert_eq!(Masking { hour_fraction: 0.25, day_fraction: 0.1 }.hours_per_day(), 6);
        assert_eq!(Masking { hour_fraction: 0.01, day_fraction: 0.1 }.hours_per_day(), 1);
        assert_eq!(Masking { hour_fraction: 0.99, day_fraction: 0.1 }.hours_per_day(), 23);
        assert_eq!(Masking::NONE.hours_per_day(), 0);
    }

    #[test]
    fn invalid_specs() {
        let mut s = small(0);
        s.archetypes[1].members = 0;
        assert!(matches!(generate(&s), Err(SynthError::InvalidArchetype { .. })));
        let mut s = small(0);
        s.archetypes[0].shape[3] = -0.1;
        assert!(matches!(s.validate(), Err(SynthError::InvalidArchetype { .. })));
        let mut s = small(0);
        s.masking.day_fraction = 1.0;
        assert_eq!(s.validate(), Err(SynthError::InvalidMasking));
        let mut s = small(0);
        s.noise_sigma = -1.0;
        assert_eq!(s.validate(), Err(SynthError::InvalidNoise(-1.0)));
        let mut s = small(0);
        s.days = 0;
        assert_eq!(s.validate(), Err(SynthError::NoDays));
        let mut s = small(0);
        s.archetypes.clear();
        assert_eq!(s.validate(), Err(SynthError::NoArchetypes));
    }

    #[test]
    fn purity_examples() {
        let truth: Vec<usize> = (0..40).map(|i| i / 10).collect();
        assert_eq!(purity(&[0; 40], &truth), 0.25);
        let relabelled: Vec<usize> = truth.iter().map(|t| 3 - t).collect();
        assert_eq!(purity(&relabelled, &truth), 1.0);
        assert_eq!(rand_index(&relabelled, &truth), 1.0);
    }

    fn naive_rand(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len();
        let mut agree = 0usize;
        let mut total = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                total += 1;
                if (a[i] == a[j]) == (b[i] == b[j]) {
                    agree += 1;
                }
            }
        }
        agree as f64 / total as f64
    }

    #[test]
    fn rand_index_matches_pair_counting() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.random_range(2..60);
            let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..5)).collect();
            assert!((rand_index(&a, &b) - naive_rand(&a, &b)).abs() < 1e-15);
        }
    }

    #[test]
    fn score_recovery_coverage() {
        let out = generate(&small(1)).unwrap();
        let ids: Vec<PropertyId> = out.ledger.properties.iter().map(|p| p.property_id.clone()).collect();
        let truth: Vec<usize> = out.ledger.properties.iter().map(|p| p.archetype).collect();
        let result = ClusteringResult {
            assignments: truth.iter().map(|t| (t + 1) % 4).collect(),
            centroids: vec![[0.0; HOURS]; 4],
            per_cluster_wcss: vec![0.0; 4],
            total_wcss: 0.0,
            winning_restart: 0,
            iterations_used: 0,
            monotonicity_violations: 0,
        };
        let score = score_recovery(&result, &ids, &out.ledger).unwrap();
        assert_eq!((score.purity, score.rand_index), (1.0, 1.0));
        assert!(matches!(score_recovery(&result, &ids[1..], &out.ledger), Err(SynthError::LengthMismatch { .. })));
        let mut short = result.clone();
        short.assignments.pop();
        assert!(matches!(score_recovery(&short, &ids[..92], &out.ledger), Err(SynthError::Uncovered(_))));
        let mut odd = ids.clone();
        odd[0] = PropertyId::new("nobody");
        assert!(matches!(score_recovery(&result, &odd, &out.ledger), Err(SynthError::UnknownProperty(_))));
    }
}
