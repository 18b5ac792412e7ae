// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Everything that determines a run. Its digest ignores timing, so two runs
/// with the same inputs share it.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub options: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub seed_from_entropy: bool,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub tool_version: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    #[serde(flatten)]
    pub record: RunRecord,
    pub digest: String,
    pub wall_clock_seconds: f64,
}

/// Output directory that tracks what it writes.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<FileDigest>,
}

impl OutputDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> CliResult<()> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.written.push(FileDigest { path: name.to_string(), sha256: sha256_hex(contents), bytes: contents.len() });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::config(format!("{name}: {e}")))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Writes `manifest.json` listing every file written so far.
    pub fn finish(mut self, mut record: RunRecord, started: Instant) -> CliResult<()> {
        record.outputs = std::mem::take(&mut self.written);
        let canonical = serde_json::to_vec(&record).expect("manifest serializes");
        let manifest = RunManifest { digest: sha256_hex(&canonical), record, wall_clock_seconds: started.elapsed().as_secs_f64() };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        let path = self.root.join("manifest.json");
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))
    }
}

pub fn digest_inputs(paths: &[PathBuf]) -> CliResult<Vec<FileDigest>> {
    paths
        .iter()
        .map(|p| {
            let bytes = fs::read(p).map_err(|e| CliError::io(p, e))?;
            Ok(FileDigest { path: p.display().to_string(), sha256: sha256_hex(&bytes), bytes: bytes.len() })
        })
        .collect()
}
