//! Parallel Monte Carlo over the cells of a [`SweepConfig`].
//!
//! Trial indices are assigned globally from the configuration: cell `i`
//! owns the indices `i·n .. (i+1)·n` for `n = samples_per_cell`. Each cell is
//! cut into blocks of [`BLOCK_SIZE`] trials, blocks are evaluated on a rayon
//! pool, and the per-block accumulators are merged in block order. Nothing
//! emitted therefore depends on scheduling or on the worker count.

use entdetect_core::analytics::{StatsAccumulator, SweepStats};
use entdetect_core::criteria::evaluate_state;
use entdetect_core::sampling::sample_reduced_state;
use entdetect_core::SampleSpec;
use rayon::prelude::*;

use crate::config::{Cell, SweepConfig};
use crate::error::{HarnessError, Result};

pub const BLOCK_SIZE: u64 = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct CellResult {
    pub cell: Cell,
    /// Global index of the cell's first trial.
    pub first_trial: u64,
    pub stats: SweepStats,
}

#[derive(Clone, Copy, Debug)]
struct Block {
    cell: usize,
    first_trial: u64,
    len: u64,
}

fn plan(cells: &[Cell], samples: u64) -> Vec<Block> {
    let mut blocks = Vec::new();
    for (i, _) in cells.iter().enumerate() {
        let base = i as u64 * samples;
        let mut start = 0;
        while start < samples {
            let len = BLOCK_SIZE.min(samples - start);
            blocks.push(Block {
                cell: i,
                first_trial: base + start,
                len,
            });
            start += len;
        }
    }
    blocks
}

fn run_block(cell: Cell, block: &Block, seed: u64, eps: f64) -> Result<StatsAccumulator> {
    let mut acc = StatsAccumulator::new(cell.d1, cell.d2, cell.k, eps);
    let base = SampleSpec {
        d1: cell.d1,
        d2: cell.d2,
        k: cell.k,
        master_seed: seed,
        trial_index: block.first_trial,
    };
    for t in block.first_trial..block.first_trial + block.len {
        let spec = base.with_trial(t);
        let rho = sample_reduced_state::<f64>(&spec)?;
        let record = evaluate_state(&rho, spec, eps)?;
        acc.push(&record)?;
    }
    Ok(acc)
}

/// Run `f` on a dedicated pool of `workers` threads.
pub fn with_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

/// Evaluate every cell of `config`; results are in [`SweepConfig::cells`]
/// order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<CellResult>> {
    config.validate()?;
    let cells = config.cells();
    let samples = config.samples_per_cell;
    let blocks = plan(&cells, samples);
    let workers = config.workers.resolve()?;

    let partials: Vec<StatsAccumulator> = with_pool(workers, || {
        blocks
            .par_iter()
            .map(|b| run_block(cells[b.cell], b, config.master_seed, config.eps))
            .collect::<Result<Vec<_>>>()
    })??;

    let mut merged: Vec<StatsAccumulator> = cells
        .iter()
        .map(|c| StatsAccumulator::new(c.d1, c.d2, c.k, config.eps))
        .collect();
    for (block, acc) in blocks.iter().zip(&partials) {
        merged[block.cell].merge(acc)?;
    }
    Ok(cells
        .iter()
        .zip(merged)
        .enumerate()
        .map(|(i, (&cell, acc))| CellResult {
            cell,
            first_trial: i as u64 * samples,
            stats: acc.finish(),
        })
        .collect())
}
