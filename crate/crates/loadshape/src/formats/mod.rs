//! CSV and JSON files exchanged between pipeline stages.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! value read back is bit-identical to the one written.

mod clustering;
mod plot;
mod scheme;
mod tables;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

pub use clustering::{read_clustering, read_elbow, write_assignments, write_clustering, write_elbow, ClusteringDocument, ProfileRef};
pub use plot::{read_plot_csv, read_references, write_plot_csv, write_references};
pub use scheme::{apply_scheme, parse_holidays, read_holidays, read_scheme};
pub use tables::*;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{}{}: {reason}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Invalid { path: PathBuf, line: Option<u64>, reason: String },
}

impl FormatError {
    pub(crate) fn invalid(path: &Path, line: Option<u64>, reason: impl std::fmt::Display) -> Self {
        Self::Invalid { path: path.to_path_buf(), line, reason: reason.to_string() }
    }

    /// Whether the error is a missing file, as opposed to a bad one.
    pub fn is_not_found(&self) -> bool {
        matches!(self, Self::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound)
            || matches!(self, Self::Csv { source, .. } if matches!(source.kind(), csv::ErrorKind::Io(e) if e.kind() == std::io::ErrorKind::NotFound))
    }
}

pub(crate) fn csv_reader(path: &Path) -> Result<csv::Reader<File>, FormatError> {
    let file = File::open(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })?;
    Ok(csv::ReaderBuilder::new().from_reader(file))
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<File>, FormatError> {
    csv::Writer::from_path(path).map_err(|source| FormatError::Csv { path: path.to_path_buf(), source })
}

pub(crate) fn csv_err(path: &Path) -> impl Fn(csv::Error) -> FormatError + '_ {
    move |source| FormatError::Csv { path: path.to_path_buf(), source }
}

pub(crate) fn line_of(record: &csv::StringRecord) -> Option<u64> {
    record.position().map(|p| p.line())
}

pub(crate) fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

pub(crate) fn parse_f64(path: &Path, record: &csv::StringRecord, i: usize) -> Result<f64, FormatError> {
    let text = record.get(i).unwrap_or("");
    text.parse::<f64>()
        .map_err(|_| FormatError::invalid(path, line_of(record), format!("bad number {text:?} in field {}", i + 1)))
}

pub(crate) fn parse_opt_f64(path: &Path, record: &csv::StringRecord, i: usize) -> Result<Option<f64>, FormatError> {
    if record.get(i).unwrap_or("").is_empty() {
        Ok(None)
    } else {
        parse_f64(path, record, i).map(Some)
    }
}

pub(crate) fn expect_header(path: &Path, reader: &mut csv::Reader<File>, expected: &[String]) -> Result<(), FormatError> {
    let header = reader.headers().map_err(csv_err(path))?;
    if header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(FormatError::invalid(path, Some(1), format!("expected header {}", expected.join(","))));
    }
    Ok(())
}

/// `h00`..`h23`.
pub fn hour_columns() -> Vec<String> {
    (0..loadshape_core::HOURS).map(|h| format!("h{h:02}")).collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let file = File::create(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })?;
    out.write_all(b"\n").and_then(|_| out.flush()).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// Single-line JSON, for large documents such as the synthetic ground truth.
pub fn write_json_compact<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let file = File::create(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer(&mut out, value).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })?;
    out.write_all(b"\n").and_then(|_| out.flush()).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let file = File::open(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_reader(BufReader::new(file)).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    std::fs::write(path, text).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}
