//! Per-dwelling CSV files and directory loading.
//!
//! The canonical layout is
//!
//! ```text
//! date,hour,kwh,temperature,wind_speed,rainfall
//! 1990-01-01,0,0.4,3.5,4.1,0
//! ```
//!
//! with one file per dwelling named `<property_id>.csv`. An empty cell or
//! `NA` is an absent value. Other files can be read through a [`SchemaMap`].

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use loadshape_core::ingest::{merge_environment, reshape, EnvironmentFragment, IngestError, MergeReport};
use loadshape_core::{Dataset, DayRecord, EnvironmentRecord, PropertyId, RawHourRow, HOURS};
use rayon::prelude::*;
use serde::Serialize;

use crate::keyvalue;

pub const CANONICAL_HEADER: [&str; 6] = ["date", "hour", "kwh", "temperature", "wind_speed", "rainfall"];

/// Cell text meaning "no value", besides the empty cell.
pub const ABSENT_SENTINEL: &str = "NA";

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: malformed header: {reason}", path.display())]
    Header { path: PathBuf, reason: String },
    #[error("{}:{line}: {reason}", path.display())]
    Line { path: PathBuf, line: u64, reason: String },
    #[error("{}:{line}: duplicate timestamp {date} hour {hour} (first on line {first})", path.display())]
    DuplicateTimestamp { path: PathBuf, line: u64, first: u64, date: NaiveDate, hour: u8 },
    #[error("{}: {source}", path.display())]
    Reshape { path: PathBuf, source: IngestError },
    #[error("{}: no dwelling files (*.csv)", .0.display())]
    EmptyDirectory(PathBuf),
    #[error("{} of {files} dwelling files failed:\n  {}", failures.len(), join_errors(failures))]
    Failed { files: usize, failures: Vec<LoadError> },
    #[error("schema map line {line}: {reason}")]
    Schema { line: usize, reason: String },
    #[error(transparent)]
    Dataset(#[from] IngestError),
}

fn join_errors(errors: &[LoadError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n  ")
}

/// Where a field is found in a file: by header name or by 0-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    Position(usize),
    /// The file has no such column; every value is absent.
    Missing,
}

impl ColumnRef {
    fn parse(value: &str) -> Result<Self, String> {
        if value == "-" {
            return Ok(Self::Missing);
        }
        match value.strip_prefix('@') {
            Some(pos) => pos.parse().map(Self::Position).map_err(|_| format!("bad column position {value:?}")),
            None if value.is_empty() => Err("empty column name".into()),
            None => Ok(Self::Name(value.to_string())),
        }
    }

    fn resolve(&self, header: &csv::StringRecord) -> Result<Option<usize>, String> {
        match self {
            Self::Missing => Ok(None),
            Self::Position(p) if *p < header.len() => Ok(Some(*p)),
            Self::Position(p) => Err(format!("column @{p} beyond the {} header fields", header.len())),
            Self::Name(name) => header
                .iter()
                .position(|h| h == name)
                .map(Some)
                .ok_or_else(|| format!("no column named {name:?}")),
        }
    }
}

/// Maps the six canonical fields onto the columns of a nonconforming file.
///
/// Text form, one `field = column` per line where `column` is a header name,
/// `@N` for a 0-based position or `-` for a column the file lacks:
///
/// ```text
/// date = Date
/// hour = @1
/// rainfall = -
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaMap {
    /// Indexed like [`CANONICAL_HEADER`].
    columns: [ColumnRef; 6],
}

impl Default for SchemaMap {
    fn default() -> Self {
        Self { columns: CANONICAL_HEADER.map(|c| ColumnRef::Name(c.to_string())) }
    }
}

impl SchemaMap {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        let entries = keyvalue::parse(text).map_err(|e| LoadError::Schema { line: e.line, reason: e.reason })?;
        Self::from_pairs(entries.iter().map(|e| (e.line, e.key.as_str(), e.value.as_str())))
    }

    /// Overrides the default mapping with `(line, field, column)` triples.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (usize, &'a str, &'a str)>) -> Result<Self, LoadError> {
        let mut map = Self::default();
        for (line, key, value) in pairs {
            let field = CANONICAL_HEADER
                .iter()
                .position(|c| *c == key)
                .ok_or_else(|| LoadError::Schema { line, reason: format!("unknown field {key:?}") })?;
            if field < 3 && value == "-" {
                return Err(LoadError::Schema { line, reason: format!("{key} is required") });
            }
            map.columns[field] = ColumnRef::parse(value).map_err(|reason| LoadError::Schema { line, reason })?;
        }
        Ok(map)
    }

    pub fn column(&self, field: &str) -> Option<&ColumnRef> {
        CANONICAL_HEADER.iter().position(|c| *c == field).map(|i| &self.columns[i])
    }
}

/// A numeric cell that could not be used and was read as absent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellIssue {
    pub line: u64,
    pub column: &'static str,
    pub value: String,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParseReport {
    pub property_id: PropertyId,
    pub path: PathBuf,
    pub rows: usize,
    /// Empty cells. `NA` cells are listed in `issues` instead.
    pub absent_cells: usize,
    pub issues: Vec<CellIssue>,
}

enum Cell {
    Value(f64),
    Absent,
    Rejected(&'static str),
}

fn parse_cell(text: &str, non_negative: bool) -> Cell {
    if text.is_empty() {
        return Cell::Absent;
    }
    if text == ABSENT_SENTINEL {
        return Cell::Rejected("absent sentinel");
    }
    match text.parse::<f64>() {
        Ok(v) if !v.is_finite() => Cell::Rejected("not finite"),
        Ok(v) if non_negative && v < 0.0 => Cell::Rejected("negative"),
        Ok(v) => Cell::Value(v),
        Err(_) => Cell::Rejected("not a number"),
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> LoadError + '_ {
    move |source| LoadError::Io { path: path.to_path_buf(), source }
}

fn csv_error(path: &Path, e: csv::Error) -> LoadError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => LoadError::Io { path: path.to_path_buf(), source },
        kind => LoadError::Line { path: path.to_path_buf(), line, reason: format!("{kind:?}") },
    }
}

/// Reads one dwelling file into hourly rows.
///
/// Bad numeric cells become absent values and are listed in the report;
/// bad dates or hours and repeated timestamps are errors.
pub fn parse_dwelling_file(
    path: &Path,
    property_id: &PropertyId,
    schema: &SchemaMap,
) -> Result<(Vec<RawHourRow>, ParseReport), LoadError> {
    let file = File::open(path).map_err(io_error(path))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let header_error = |reason: String| LoadError::Header { path: path.to_path_buf(), reason };
    let mut index = [None; 6];
    for (slot, column) in index.iter_mut().zip(&schema.columns) {
        *slot = column.resolve(&header).map_err(header_error)?;
    }
    let required = |i: usize| index[i].expect("required columns cannot be missing");

    let mut report = ParseReport {
        property_id: property_id.clone(),
        path: path.to_path_buf(),
        rows: 0,
        absent_cells: 0,
        issues: Vec::new(),
    };
    let mut rows = Vec::new();
    let mut seen: HashMap<(NaiveDate, u8), u64> = HashMap::new();
    let mut record = csv::StringRecord::new();
    while reader.read_record(&mut record).map_err(|e| csv_error(path, e))? {
        let line = record.position().map_or(0, |p| p.line());
        let line_error = |reason: String| LoadError::Line { path: path.to_path_buf(), line, reason };
        let date_text = &record[required(0)];
        let date = NaiveDate::parse_from_str(date_text, "%Y-%m-%d")
            .map_err(|_| line_error(format!("bad date {date_text:?}")))?;
        let hour_text = &record[required(1)];
        let hour = hour_text
            .parse::<u8>()
            .ok()
            .filter(|h| usize::from(*h) < HOURS)
            .ok_or_else(|| line_error(format!("bad hour {hour_text:?}")))?;
        if let Some(&first) = seen.get(&(date, hour)) {
            return Err(LoadError::DuplicateTimestamp { path: path.to_path_buf(), line, first, date, hour });
        }
        seen.insert((date, hour), line);

        let mut values = [None; 4];
        for (k, value) in values.iter_mut().enumerate() {
            let field = k + 2;
            let Some(col) = index[field] else { continue };
            // Temperature may be negative; energy, wind and rain may not.
            match parse_cell(&record[col], field != 3) {
                Cell::Value(v) => *value = Some(v),
                Cell::Absent => report.absent_cells += 1,
                Cell::Rejected(reason) => report.issues.push(CellIssue {
                    line,
                    column: CANONICAL_HEADER[field],
                    value: record[col].to_string(),
                    reason,
                }),
            }
        }
        let [kwh, temperature, wind_speed, rainfall] = values;
        rows.push(RawHourRow { property_id: property_id.clone(), date, hour, kwh, temperature, wind_speed, rainfall });
    }
    report.rows = rows.len();
    Ok((rows, report))
}

/// Dwelling files of `dir` in name order, with the property id from each stem.
pub fn dwelling_files(dir: &Path) -> Result<Vec<(PropertyId, PathBuf)>, LoadError> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io_error(dir))? {
        let path = entry.map_err(io_error(dir))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "csv") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                files.push((PropertyId::new(stem), path));
            }
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(LoadError::EmptyDirectory(dir.to_path_buf()));
    }
    Ok(files)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub dataset: Dataset,
    pub reports: Vec<ParseReport>,
    pub merge: MergeReport,
}

/// Loads every dwelling file of `dir`. Files are parsed in parallel; any
/// failures are collected and returned together.
pub fn load_dataset(dir: &Path, schema: &SchemaMap) -> Result<Loaded, LoadError> {
    let files = dwelling_files(dir)?;
    type Parsed = (Vec<DayRecord>, EnvironmentFragment, ParseReport);
    let parsed: Vec<Result<Parsed, LoadError>> = files
        .par_iter()
        .map(|(id, path)| {
            let (rows, report) = parse_dwelling_file(path, id, schema)?;
            let (days, fragment) =
                reshape(&rows, id).map_err(|source| LoadError::Reshape { path: path.clone(), source })?;
            Ok((days, fragment, report))
        })
        .collect();

    let mut days = Vec::new();
    let mut fragments = Vec::new();
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for result in parsed {
        match result {
            Ok((d, f, r)) => {
                days.extend(d);
                fragments.push(f);
                reports.push(r);
            }
            Err(e) => failures.push(e),
        }
    }
    if !failures.is_empty() {
        return Err(LoadError::Failed { files: files.len(), failures });
    }
    let (environment, merge) = merge_environment(&fragments);
    let dataset = Dataset::new(days, environment)?;
    let rows: usize = reports.iter().map(|r| r.rows).sum();
    log::info!("{} files, {} rows, {} day records", files.len(), rows, dataset.days().len());
    if !merge.conflicts.is_empty() {
        log::warn!("{} weather values disagreed between dwellings and were averaged", merge.conflicts.len());
    }
    Ok(Loaded { dataset, reports, merge })
}

fn cell(value: Option<f64>) -> String {
    value.map_or_else(String::new, |v| v.to_string())
}

/// Writes one dwelling's days in the canonical layout, with the site weather
/// repeated on every line. Hours absent from both are skipped.
pub fn write_dwelling_file(
    path: &Path,
    days: &[DayRecord],
    environment: impl Fn(NaiveDate) -> Option<EnvironmentRecord>,
) -> Result<(), LoadError> {
    let file = File::create(path).map_err(io_error(path))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, line: String| writeln!(out, "{line}").map_err(io_error(path));
    write(&mut out, CANONICAL_HEADER.join(","))?;
    for day in days {
        let env = environment(day.date());
        for h in 0..HOURS {
            let weather = env.as_ref().map(|e| [e.temperature[h], e.wind_speed[h], e.rainfall[h]]).unwrap_or([None; 3]);
            if day.readings()[h].is_none() && weather.iter().all(Option::is_none) {
                continue;
            }
            let line = format!(
                "{},{},{},{},{},{}",
                day.date(),
                h,
                cell(day.readings()[h]),
                cell(weather[0]),
                cell(weather[1]),
                cell(weather[2])
            );
            write(&mut out, line)?;
        }
    }
    out.flush().map_err(io_error(path))
}
