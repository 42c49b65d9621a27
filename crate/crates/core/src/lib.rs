//! Building blocks for turning hourly household electricity readings into
//! clustered representative daily load profiles.
//!
//! The crate is `no_std` (it needs `alloc`) and does no IO. It covers:
//!
//! - [`ingest`]: day records, site-wide environment records, reshaping of
//!   hourly rows into property-days and merging of per-property weather.
//! - [`cleaning`]: valid/error day split, hourly average tables and
//!   fraction-of-average imputation.
//! - [`daytype`]: calendar and weather driven day-type labels.
//! - [`profile`]: representative profiles, normalisation and distances.
//! - [`cluster`]: multi-restart k-means, WCSS, elbow scan and an exhaustive
//!   optimum for small instances.
//! - [`report`]: plot series for cluster panels, elbow curves and reference
//!   overlays.
//! - [`synth`]: planted-truth datasets and recovery scores.
//!
//! File formats, parallel drivers and the command line live in the
//! `loadshape` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cleaning;
pub mod cluster;
pub mod daytype;
pub mod ingest;
pub mod profile;
pub mod report;
pub mod synth;

mod math;
mod seed;

pub use seed::derive_seed;

/// Number of hourly slots in a day.
pub const HOURS: usize = 24;

/// One value per hour of the day.
pub type Hourly = [f64; HOURS];

pub use ingest::{DayKey, DayRecord, Dataset, EnvironmentRecord, PropertyId, RawHourRow};
