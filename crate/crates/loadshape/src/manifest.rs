//! `manifest.json`: what each stage of a run produced, with content digests.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::formats::{read_json, write_json, FormatError};
use crate::TOOLKIT_VERSION;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// Relative to the run directory, `/`-separated.
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StageRecord {
    /// Effective settings of the stage, e.g. `k = 4`.
    pub parameters: BTreeMap<String, String>,
    pub outputs: Vec<OutputRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub run_id: String,
    pub toolkit_version: String,
    pub seed: u64,
    pub input_dir: Option<String>,
    pub config_files: Vec<String>,
    pub stages: BTreeMap<String, StageRecord>,
}

impl RunManifest {
    pub fn new(run_id: impl Into<String>, seed: u64) -> Self {
        Self {
            run_id: run_id.into(),
            toolkit_version: TOOLKIT_VERSION.to_string(),
            seed,
            input_dir: None,
            config_files: Vec::new(),
            stages: BTreeMap::new(),
        }
    }

    /// The manifest of `dir`, or a fresh one if the directory has none yet.
    pub fn load_or_new(dir: &Path, run_id: &str, seed: u64) -> Result<Self, FormatError> {
        let path = dir.join(MANIFEST_FILE);
        if !path.exists() {
            return Ok(Self::new(run_id, seed));
        }
        let mut manifest: Self = read_json(&path)?;
        manifest.toolkit_version = TOOLKIT_VERSION.to_string();
        Ok(manifest)
    }

    /// Records (or replaces) a stage, digesting each output file under `dir`.
    pub fn record_stage(
        &mut self,
        dir: &Path,
        stage: &str,
        parameters: BTreeMap<String, String>,
        outputs: &[String],
    ) -> Result<(), FormatError> {
        let outputs = outputs
            .iter()
            .map(|rel| {
                let bytes = std::fs::read(dir.join(rel)).map_err(|source| FormatError::Io { path: dir.join(rel), source })?;
                Ok(OutputRecord { path: rel.clone(), sha256: sha256_hex(&bytes) })
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        self.stages.insert(stage.to_string(), StageRecord { parameters, outputs });
        Ok(())
    }

    pub fn add_config_file(&mut self, path: &str) {
        if !self.config_files.iter().any(|p| p == path) {
            self.config_files.push(path.to_string());
        }
    }

    pub fn save(&self, dir: &Path) -> Result<(), FormatError> {
        write_json(&dir.join(MANIFEST_FILE), self)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
