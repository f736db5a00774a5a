//! Run manifests and the pairing between results tables and manifests.
//!
//! A table `NAME.csv` is valid only when `NAME.manifest.json` exists next to
//! it and records the table's SHA-256. Both files are written through a
//! temporary file and a rename, the table first.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::SweepConfig;
use crate::error::{io_err, HarnessError, Result};
use crate::sweep::CellResult;

pub const VERSION: &str = concat!("entdetect ", env!("CARGO_PKG_VERSION"));
pub const MANIFEST_SUFFIX: &str = ".manifest.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSummary {
    pub d1: usize,
    pub d2: usize,
    pub k: usize,
    pub n: u64,
    pub n_npt: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: SweepConfig,
    pub version: String,
    pub started_at: String,
    pub finished_at: String,
    pub cells: Vec<CellSummary>,
    /// Hex SHA-256 of the results table.
    pub checksum: String,
}

impl RunManifest {
    pub fn new(
        config: &SweepConfig,
        started_at: String,
        finished_at: String,
        results: &[CellResult],
        table: &[u8],
    ) -> Self {
        Self {
            config: config.clone(),
            version: VERSION.into(),
            started_at,
            finished_at,
            cells: results
                .iter()
                .map(|r| CellSummary {
                    d1: r.cell.d1,
                    d2: r.cell.d2,
                    k: r.cell.k,
                    n: r.stats.n_total,
                    n_npt: r.stats.n_npt,
                })
                .collect(),
            checksum: sha256_hex(table),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|source| HarnessError::Json {
            path: path.to_owned(),
            source,
        })
    }
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Manifest path paired with a results table.
pub fn manifest_path(table: &Path) -> PathBuf {
    let stem = table
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    table.with_file_name(format!("{stem}{MANIFEST_SUFFIX}"))
}

/// Write `bytes` to `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(bytes).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    drop(f);
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// State of a results table on disk.
#[derive(Clone, Debug, PartialEq)]
pub enum TableStatus {
    /// Neither table nor manifest exists.
    Absent,
    Valid(Box<RunManifest>),
    /// Table without a manifest.
    Orphan,
    /// Manifest without a table.
    MissingTable,
    Corrupt(String),
}

pub fn inspect(table: &Path) -> TableStatus {
    let mpath = manifest_path(table);
    match (table.exists(), mpath.exists()) {
        (false, false) => TableStatus::Absent,
        (true, false) => TableStatus::Orphan,
        (false, true) => TableStatus::MissingTable,
        (true, true) => {
            let manifest = match RunManifest::load(&mpath) {
                Ok(m) => m,
                Err(e) => return TableStatus::Corrupt(format!("unreadable manifest: {e}")),
            };
            match fs::read(table) {
                Ok(bytes) if sha256_hex(&bytes) == manifest.checksum => {
                    TableStatus::Valid(Box::new(manifest))
                }
                Ok(_) => TableStatus::Corrupt("checksum mismatch".into()),
                Err(e) => TableStatus::Corrupt(format!("unreadable table: {e}")),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditEntry {
    pub table: PathBuf,
    pub status: TableStatus,
}

impl AuditEntry {
    pub fn is_valid(&self) -> bool {
        matches!(self.status, TableStatus::Valid(_))
    }
}

/// Inspect every table and manifest in `dir`, sorted by table path.
pub fn audit_dir(dir: &Path) -> Result<Vec<AuditEntry>> {
    let mut tables = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        if let Some(stem) = name.strip_suffix(MANIFEST_SUFFIX) {
            tables.push(path.with_file_name(format!("{stem}.csv")));
        } else if name.ends_with(".csv") {
            tables.push(path);
        }
    }
    tables.sort();
    tables.dedup();
    Ok(tables
        .into_iter()
        .map(|table| {
            let status = inspect(&table);
            AuditEntry { table, status }
        })
        .collect())
}
