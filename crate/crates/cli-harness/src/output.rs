//! CSV tables with JSON sidecars, staged and then moved into place, and the
//! run manifest written last.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

/// Version of the CSV + sidecar layout.
pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub description: String,
}

/// A numeric table; every cell is written with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[(&str, &str)]) -> Self {
        let columns =
            columns.iter().map(|(n, d)| Column { name: n.to_string(), description: d.to_string() }).collect();
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.name.as_str())).map_err(HarnessError::runtime)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}"))).map_err(HarnessError::runtime)?;
        }
        w.into_inner().map_err(HarnessError::runtime)
    }
}

/// One CSV file and the experiment-specific results for its sidecar.
#[derive(Debug, Clone)]
pub struct Artifact {
    /// File stem; the CSV is `<name>.csv` and the sidecar `<name>.json`.
    pub name: String,
    pub table: Table,
    pub results: Value,
}

impl Artifact {
    pub fn new(name: impl Into<String>, table: Table, results: Value) -> Self {
        Artifact { name: name.into(), table, results }
    }
}

#[derive(Serialize)]
struct Provenance<'a> {
    generator: &'a str,
    version: &'a str,
    config_sha256: &'a str,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    schema_version: u32,
    experiment: &'a str,
    file: String,
    rows: usize,
    columns: &'a [Column],
    parameters: &'a ExperimentConfig,
    results: &'a Value,
    provenance: Provenance<'a>,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct OutputEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config_sha256: String,
    pub code_version: String,
    pub seed: Option<u64>,
    pub workers: usize,
    pub started_unix: f64,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the physics part of a config in canonical JSON.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let json = serde_json::to_vec(&config.physics()).unwrap_or_default();
    sha256_hex(&json)
}

pub struct RunInfo {
    pub started_unix: f64,
    pub wall_time_s: f64,
    pub workers: usize,
}

/// Files moved into `dir` so far, removed again if a later step fails.
struct Placed {
    files: Vec<PathBuf>,
    created_dir: Option<PathBuf>,
    done: bool,
}

impl Drop for Placed {
    fn drop(&mut self) {
        if self.done {
            return;
        }
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        if let Some(d) = &self.created_dir {
            let _ = fs::remove_dir(d);
        }
    }
}

/// Writes every artifact into `dir`, then `manifest.json` atomically.
/// Nothing is left behind if any step fails.
pub fn write_run(
    dir: &Path,
    config: &ExperimentConfig,
    artifacts: &[Artifact],
    info: RunInfo,
) -> Result<RunManifest> {
    let created_dir = if dir.exists() {
        None
    } else {
        fs::create_dir_all(dir)?;
        Some(dir.to_path_buf())
    };
    let mut placed = Placed { files: Vec::new(), created_dir, done: false };
    let staging = tempfile::Builder::new().prefix(".staging-").tempdir_in(dir)?;
    let physics = config.physics();
    let hash = config_hash(config);
    let version = env!("CARGO_PKG_VERSION");
    let mut outputs = Vec::new();
    let mut staged = Vec::new();
    for a in artifacts {
        let csv_name = format!("{}.csv", a.name);
        let csv = a.table.to_csv()?;
        let sidecar = Sidecar {
            schema_version: SCHEMA_VERSION,
            experiment: config.experiment.name(),
            file: csv_name.clone(),
            rows: a.table.rows.len(),
            columns: &a.table.columns,
            parameters: &physics,
            results: &a.results,
            provenance: Provenance { generator: "dispersive", version, config_sha256: &hash },
        };
        let mut json = serde_json::to_vec_pretty(&sidecar).map_err(HarnessError::runtime)?;
        json.push(b'\n');
        for (name, bytes) in [(csv_name, csv), (format!("{}.json", a.name), json)] {
            fs::write(staging.path().join(&name), &bytes)?;
            outputs.push(OutputEntry { path: name.clone(), sha256: sha256_hex(&bytes), bytes: bytes.len() as u64 });
            staged.push(name);
        }
    }
    for name in &staged {
        let target = dir.join(name);
        fs::rename(staging.path().join(name), &target)?;
        placed.files.push(target);
    }
    let manifest = RunManifest {
        experiment: config.experiment.name().to_string(),
        config_sha256: hash,
        code_version: version.to_string(),
        seed: config.seed(),
        workers: info.workers,
        started_unix: info.started_unix,
        wall_time_s: info.wall_time_s,
        outputs,
    };
    let mut tmp = tempfile::Builder::new().prefix(".manifest-").tempfile_in(dir)?;
    serde_json::to_writer_pretty(&mut tmp, &manifest).map_err(HarnessError::runtime)?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(MANIFEST_NAME)).map_err(|e| HarnessError::Io(e.error))?;
    placed.done = true;
    Ok(manifest)
}
