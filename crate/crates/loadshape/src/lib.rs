//! Files, parallel drivers and run-directory bookkeeping around
//! [`loadshape_core`].
//!
//! The `loadshape` binary chains these into pipeline stages that hand data to
//! each other through CSV and JSON files in a run directory.

pub mod dwelling;
pub mod formats;
pub mod keyvalue;
pub mod manifest;
pub mod parallel;
pub mod svg;

pub use loadshape_core;

/// Version string written into manifests and SVG comments.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
