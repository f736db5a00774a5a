//! Sweep plans behind the scanning subcommands and their persisted execution.

use std::fs;
use std::path::PathBuf;

use crate::config::{GridEntry, IntRange, SweepConfig};
use crate::error::{io_err, HarnessError, Result};
use crate::manifest::{inspect, manifest_path, timestamp, write_atomic, RunManifest, TableStatus};
use crate::sweep::{run_sweep, CellResult};
use crate::table;

/// A named sweep whose results land in `<output_dir>/<name>.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunPlan {
    pub name: String,
    pub config: SweepConfig,
    /// Prefix rows with the total dimension `d1·d2`.
    pub with_d12: bool,
}

impl RunPlan {
    pub fn table_path(&self) -> PathBuf {
        self.config.output_dir.join(format!("{}.csv", self.name))
    }

    /// One row per rank for a fixed `d1 ⊗ d2`.
    pub fn scan_rank(template: &SweepConfig, d1: usize, d2: usize, k: IntRange) -> Result<Self> {
        Self::build(
            format!("scan_rank_{d1}x{d2}"),
            template,
            vec![GridEntry { d1, d2, k_min: k.start, k_max: k.end }],
            false,
        )
    }

    /// One row per `d2` for fixed `d1` and `k`.
    pub fn scan_dim(template: &SweepConfig, d1: usize, d2: IntRange, k: usize) -> Result<Self> {
        let grid = (d2.start..=d2.end)
            .map(|d2| GridEntry { d1, d2, k_min: k, k_max: k })
            .collect();
        Self::build(format!("scan_dim_{d1}_k{k}"), template, grid, false)
    }

    /// Every factorization `d1·d2 = d12` with `2 ≤ d1 ≤ d2`, at `k = 2` and
    /// `k = d12`.
    pub fn asymmetry(template: &SweepConfig, d12: usize) -> Result<Self> {
        let facts = factorizations(d12);
        if facts.len() < 2 {
            return Err(HarnessError::Config(format!(
                "d12 = {d12} has {} factorization(s) with both factors at least 2; need 2 or more",
                facts.len()
            )));
        }
        let grid = facts
            .into_iter()
            .flat_map(|(d1, d2)| {
                [2, d12].map(|k| GridEntry { d1, d2, k_min: k, k_max: k })
            })
            .collect();
        Self::build(format!("asymmetry_{d12}"), template, grid, true)
    }

    fn build(name: String, template: &SweepConfig, grid: Vec<GridEntry>, with_d12: bool) -> Result<Self> {
        let config = SweepConfig { grid, ..template.clone() };
        config.validate()?;
        Ok(Self { name, config, with_d12 })
    }

    /// Render the table for already computed results.
    pub fn render(&self, results: &[CellResult]) -> Result<Vec<u8>> {
        table::render(results, &self.config.selected_criteria(), self.with_d12)
    }
}

/// `(d1, d2)` with `2 ≤ d1 ≤ d2` and `d1·d2 = d12`, ascending in `d1`.
pub fn factorizations(d12: usize) -> Vec<(usize, usize)> {
    (2..)
        .take_while(|d| d * d <= d12)
        .filter(|d| d12.is_multiple_of(*d))
        .map(|d| (d, d12 / d))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunOutcome {
    Completed {
        table: PathBuf,
        results: Vec<CellResult>,
    },
    /// A valid table for the same configuration already exists.
    UpToDate {
        table: PathBuf,
        manifest: Box<RunManifest>,
    },
}

impl RunOutcome {
    pub fn table(&self) -> &PathBuf {
        match self {
            RunOutcome::Completed { table, .. } | RunOutcome::UpToDate { table, .. } => table,
        }
    }
}

/// Run `plan` unless a valid table for the same configuration exists (or
/// `force` is set), then write the table and its manifest.
pub fn execute(plan: &RunPlan, force: bool) -> Result<RunOutcome> {
    let dir = &plan.config.output_dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let table = plan.table_path();
    if !force {
        if let TableStatus::Valid(manifest) = inspect(&table) {
            if manifest.config.fingerprint() == plan.config.fingerprint() {
                return Ok(RunOutcome::UpToDate { table, manifest });
            }
        }
    }
    let started = timestamp();
    let results = run_sweep(&plan.config)?;
    let bytes = plan.render(&results)?;
    let manifest = RunManifest::new(&plan.config, started, timestamp(), &results, &bytes);
    write_atomic(&table, &bytes)?;
    let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    write_atomic(&manifest_path(&table), &json)?;
    Ok(RunOutcome::Completed { table, results })
}
