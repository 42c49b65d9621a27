use std::collections::BTreeMap;
use std::path::Path;

use chrono::NaiveDate;
use loadshape_core::cleaning::{CleaningNote, ImputationLogEntry, ImputationMethod, ValidityReport};
use loadshape_core::daytype::{DayClass, DayTypeLabel, Labeling, Season};
use loadshape_core::ingest::{MergeReport, WeatherField};
use loadshape_core::profile::{DayProfile, DroppedCell, ProfileSource, Units};
use loadshape_core::report::OverlayDistance;
use loadshape_core::{Dataset, DayKey, DayRecord, EnvironmentRecord, PropertyId, HOURS};

use super::{csv_err, csv_reader, csv_writer, expect_header, fmt_opt, hour_columns, line_of, parse_f64, parse_opt_f64, FormatError};
use crate::dwelling::ParseReport;

fn parse_date(path: &Path, record: &csv::StringRecord, i: usize) -> Result<NaiveDate, FormatError> {
    let text = record.get(i).unwrap_or("");
    NaiveDate::parse_from_str(text, "%Y-%m-%d").map_err(|_| FormatError::invalid(path, line_of(record), format!("bad date {text:?}")))
}

fn header(prefix: &[&str], suffix: &[&str]) -> Vec<String> {
    prefix.iter().map(|s| s.to_string()).chain(hour_columns()).chain(suffix.iter().map(|s| s.to_string())).collect()
}

/// `property_id,date,h00..h23`, absent hours as empty cells.
pub fn write_days<'a>(path: &Path, days: impl IntoIterator<Item = &'a DayRecord>) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(header(&["property_id", "date"], &[])).map_err(csv_err(path))?;
    for day in days {
        let mut row = vec![day.property_id().to_string(), day.date().to_string()];
        row.extend(day.readings().iter().map(|r| fmt_opt(*r)));
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn read_days(path: &Path) -> Result<Vec<DayRecord>, FormatError> {
    let mut r = csv_reader(path)?;
    expect_header(path, &mut r, &header(&["property_id", "date"], &[]))?;
    let mut days = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_err(path))?;
        let date = parse_date(path, &record, 1)?;
        let mut readings = [None; HOURS];
        for (h, slot) in readings.iter_mut().enumerate() {
            *slot = parse_opt_f64(path, &record, h + 2)?;
        }
        let day = DayRecord::new(PropertyId::new(&record[0]), date, readings)
            .map_err(|e| FormatError::invalid(path, line_of(&record), e))?;
        days.push(day);
    }
    Ok(days)
}

const ENVIRONMENT_HEADER: [&str; 5] = ["date", "hour", "temperature", "wind_speed", "rainfall"];

/// `date,hour,temperature,wind_speed,rainfall`, one line per hour with any value.
pub fn write_environment<'a>(path: &Path, records: impl IntoIterator<Item = &'a EnvironmentRecord>) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(ENVIRONMENT_HEADER).map_err(csv_err(path))?;
    for rec in records {
        for h in 0..HOURS {
            let values = [rec.temperature[h], rec.wind_speed[h], rec.rainfall[h]];
            if values.iter().all(Option::is_none) {
                continue;
            }
            let mut row = vec![rec.date.to_string(), h.to_string()];
            row.extend(values.iter().map(|v| fmt_opt(*v)));
            w.write_record(&row).map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn read_environment(path: &Path) -> Result<Vec<EnvironmentRecord>, FormatError> {
    let mut r = csv_reader(path)?;
    expect_header(path, &mut r, &ENVIRONMENT_HEADER.map(String::from))?;
    let mut records: BTreeMap<NaiveDate, EnvironmentRecord> = BTreeMap::new();
    for record in r.records() {
        let record = record.map_err(csv_err(path))?;
        let date = parse_date(path, &record, 0)?;
        let hour = record[1]
            .parse::<usize>()
            .ok()
            .filter(|h| *h < HOURS)
            .ok_or_else(|| FormatError::invalid(path, line_of(&record), format!("bad hour {:?}", &record[1])))?;
        let rec = records.entry(date).or_insert_with(|| EnvironmentRecord::empty(date));
        rec.temperature[hour] = parse_opt_f64(path, &record, 2)?;
        rec.wind_speed[hour] = parse_opt_f64(path, &record, 3)?;
        rec.rainfall[hour] = parse_opt_f64(path, &record, 4)?;
    }
    Ok(records.into_values().collect())
}

/// Days plus, when `environment` is given, the site weather.
pub fn read_dataset(days: &Path, environment: Option<&Path>) -> Result<Dataset, FormatError> {
    let env = match environment {
        Some(p) => read_environment(p)?,
        None => Vec::new(),
    };
    Dataset::new(read_days(days)?, env).map_err(|e| FormatError::invalid(days, None, e))
}

const LABEL_HEADER: [&str; 6] = ["property_id", "date", "day_class", "season", "temperature_band", "wind_band"];

/// `property_id,date,day_class,season,temperature_band,wind_band`; disabled axes are empty.
pub fn write_labels(path: &Path, labels: &Labeling) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(LABEL_HEADER).map_err(csv_err(path))?;
    for (key, label) in labels {
        w.write_record([
            key.property_id.as_str(),
            &key.date.to_string(),
            label.day_class.map_or("", DayClass::name),
            label.season.map_or("", Season::name),
            label.temperature_band.as_deref().unwrap_or(""),
            label.wind_band.as_deref().unwrap_or(""),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn read_labels(path: &Path) -> Result<Labeling, FormatError> {
    let mut r = csv_reader(path)?;
    expect_header(path, &mut r, &LABEL_HEADER.map(String::from))?;
    let mut labels = Labeling::new();
    for record in r.records() {
        let record = record.map_err(csv_err(path))?;
        let bad = |what: &str| FormatError::invalid(path, line_of(&record), format!("bad {what}"));
        let optional = |i: usize| Some(&record[i]).filter(|s| !s.is_empty());
        let day_class = optional(2).map(|s| DayClass::parse(s).ok_or_else(|| bad("day class"))).transpose()?;
        let season = optional(3).map(|s| Season::parse(s).ok_or_else(|| bad("season"))).transpose()?;
        let label = DayTypeLabel {
            day_class,
            season,
            temperature_band: optional(4).map(String::from),
            wind_band: optional(5).map(String::from),
        };
        labels.insert(DayKey::new(PropertyId::new(&record[0]), parse_date(path, &record, 1)?), label);
    }
    Ok(labels)
}

/// `id,label,h00..h23,units`.
pub fn write_profiles(path: &Path, profiles: &[DayProfile]) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(header(&["id", "label"], &["units"])).map_err(csv_err(path))?;
    for p in profiles {
        let mut row = vec![p.source().id.clone(), p.source().label.clone()];
        row.extend(p.values().iter().map(f64::to_string));
        row.push(p.units().name().to_string());
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn read_profiles(path: &Path) -> Result<Vec<DayProfile>, FormatError> {
    let mut r = csv_reader(path)?;
    expect_header(path, &mut r, &header(&["id", "label"], &["units"]))?;
    let mut profiles = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_err(path))?;
        let mut values = [0.0; HOURS];
        for (h, v) in values.iter_mut().enumerate() {
            *v = parse_f64(path, &record, h + 2)?;
        }
        let units = Units::parse(&record[HOURS + 2])
            .ok_or_else(|| FormatError::invalid(path, line_of(&record), format!("bad units {:?}", &record[HOURS + 2])))?;
        let profile = DayProfile::new(values, units, ProfileSource::new(&record[0], &record[1]))
            .map_err(|e| FormatError::invalid(path, line_of(&record), e))?;
        profiles.push(profile);
    }
    Ok(profiles)
}

/// `id,label,reason`.
pub fn write_dropped_profiles(path: &Path, dropped: &[DroppedCell]) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(["id", "label", "reason"]).map_err(csv_err(path))?;
    for d in dropped {
        w.write_record([d.id.as_str(), &d.label, &d.reason]).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// `property_id,valid_days,error_days`.
pub fn write_validity(path: &Path, report: &ValidityReport) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(["property_id", "valid_days", "error_days"]).map_err(csv_err(path))?;
    for p in &report.per_property {
        w.write_record([p.property_id.to_string(), p.valid_days.to_string(), p.error_days.to_string()])
            .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

const LOG_HEADER: [&str; 5] = ["property_id", "date", "method", "fraction", "filled_hours"];

/// `property_id,date,method,fraction,filled_hours` with hours joined by `;`.
pub fn write_imputation_log(path: &Path, log: &[ImputationLogEntry]) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(LOG_HEADER).map_err(csv_err(path))?;
    for e in log {
        let hours = e.filled_hours.iter().map(usize::to_string).collect::<Vec<_>>().join(";");
        w.write_record([e.property_id.to_string(), e.date.to_string(), e.method.name().into(), e.fraction.to_string(), hours])
            .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn read_imputation_log(path: &Path) -> Result<Vec<ImputationLogEntry>, FormatError> {
    let mut r = csv_reader(path)?;
    expect_header(path, &mut r, &LOG_HEADER.map(String::from))?;
    let mut log = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_err(path))?;
        let bad = |what: &str| FormatError::invalid(path, line_of(&record), format!("bad {what}"));
        let method = ImputationMethod::parse(&record[2]).ok_or_else(|| bad("method"))?;
        let filled_hours = record[4]
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| bad("hour list")))
            .collect::<Result<Vec<_>, _>>()?;
        log.push(ImputationLogEntry {
            property_id: PropertyId::new(&record[0]),
            date: parse_date(path, &record, 1)?,
            method,
            fraction: parse_f64(path, &record, 3)?,
            filled_hours,
        });
    }
    Ok(log)
}

/// `kind,property_id,date,reason`.
pub fn write_cleaning_notes(path: &Path, notes: &[CleaningNote]) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(["kind", "property_id", "date", "reason"]).map_err(csv_err(path))?;
    for note in notes {
        let (kind, property_id, date, reason) = match note {
            CleaningNote::Dropped { property_id, date, reason } => ("dropped", property_id, date, reason),
            CleaningNote::FellBack { property_id, date, reason } => ("fell_back", property_id, date, reason),
        };
        w.write_record([kind, property_id.as_str(), &date.to_string(), reason]).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// `property_id,line,column,value,reason`, one line per rejected cell.
pub fn write_parse_reports(path: &Path, reports: &[ParseReport]) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(["property_id", "line", "column", "value", "reason"]).map_err(csv_err(path))?;
    for report in reports {
        for issue in &report.issues {
            w.write_record([report.property_id.as_str(), &issue.line.to_string(), issue.column, &issue.value, issue.reason])
                .map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// `date,hour,field,merged,reports` with reports as `property=value` joined by `;`.
pub fn write_environment_conflicts(path: &Path, merge: &MergeReport) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(["date", "hour", "field", "merged", "reports"]).map_err(csv_err(path))?;
    for c in &merge.conflicts {
        let reports = c
            .reports
            .iter()
            .map(|(p, v)| format!("{}={v}", p.as_ref().map_or("?", PropertyId::as_str)))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([c.date.to_string(), c.hour.to_string(), WeatherField::name(c.field).into(), c.merged.to_string(), reports])
            .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// `cluster,reference,distance` with clusters named `cluster1`.. as in the plots.
pub fn write_overlay_distances(path: &Path, distances: &[OverlayDistance]) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(["cluster", "reference", "distance"]).map_err(csv_err(path))?;
    for d in distances {
        w.write_record([format!("cluster{}", d.centroid + 1), d.reference.clone(), d.distance.to_string()])
            .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}
