use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use entdetect::config::{FileConfig, IntRange, SweepConfig, Workers};
use entdetect::manifest::{audit_dir, TableStatus};
use entdetect::run::{execute, RunOutcome, RunPlan};
use entdetect::verify::{run_verify, VerifyOptions, DEFAULT_VERIFY_SAMPLES};
use entdetect::bounds::bounds_report;
use entdetect_core::Criterion;

#[derive(Parser)]
#[command(name = "entdetect", version, about = "Monte Carlo comparison of entanglement detection criteria")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by the sweeping subcommands.
#[derive(Args, Clone, Debug, Default)]
struct SweepArgs {
    /// JSON config file; its keys mirror these flags, and flags win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Samples per (d1, d2, k) cell [default: 10000]
    #[arg(long)]
    samples: Option<u64>,
    /// Master seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Threshold on criterion witnesses [default: 1e-10]
    #[arg(long)]
    eps: Option<f64>,
    /// Output directory [default: runs]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of PT,Rd,M,E,Rl [default: all]
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<Criterion>>,
    /// Worker threads or "auto"; ENTDETECT_WORKERS overrides
    #[arg(long)]
    workers: Option<Workers>,
    /// Allow k = 1 cells (calibration only)
    #[arg(long)]
    allow_rank_one: bool,
    /// Recompute even when a valid table for this configuration exists
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the rank k for a fixed d1 x d2
    ScanRank {
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        d2: Option<usize>,
        /// Inclusive rank range, e.g. 2..10 [default: 2..d1*d2]
        #[arg(long)]
        k: Option<IntRange>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Sweep d2 for fixed d1 and k
    ScanDim {
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Inclusive range, e.g. 3..10
        #[arg(long)]
        d2: Option<IntRange>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// All factorizations of a total dimension at k = 2 and k = d12
    Asymmetry {
        #[arg(long)]
        d12: Option<usize>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Print the closed-form rank thresholds and Haar averages
    Bounds {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
    },
    /// Run the invariant suites on random states
    Verify {
        /// Samples per cell [default: 1000]
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        workers: Option<Workers>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Audit a results directory for orphan or corrupt tables
    Check {
        #[arg(long, default_value = "runs")]
        out: PathBuf,
    },
}

fn load_file(path: &Option<PathBuf>) -> anyhow::Result<FileConfig> {
    match path {
        Some(p) => Ok(FileConfig::load(p)?),
        None => Ok(FileConfig::default()),
    }
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> anyhow::Result<T> {
    flag.or(file)
        .ok_or_else(|| anyhow!("--{name} is required (flag or config file)"))
}

/// Template configuration (empty grid) from flags layered over the file.
fn template(args: &SweepArgs, file: &FileConfig) -> SweepConfig {
    let mut c = SweepConfig::new(Vec::new());
    if let Some(v) = args.samples.or(file.samples) {
        c.samples_per_cell = v;
    }
    if let Some(v) = args.seed.or(file.seed) {
        c.master_seed = v;
    }
    if let Some(v) = args.eps.or(file.eps) {
        c.eps = v;
    }
    if let Some(v) = args.out.clone().or_else(|| file.out.clone()) {
        c.output_dir = v;
    }
    if let Some(v) = args.criteria.clone().or_else(|| file.criteria.clone()) {
        c.criteria = v;
    }
    if let Some(v) = args.workers.or(file.workers) {
        c.workers = v;
    }
    c.allow_rank_one = args.allow_rank_one || file.allow_rank_one.unwrap_or(false);
    c
}

fn run_plan(plan: RunPlan, force: bool) -> anyhow::Result<ExitCode> {
    let cells = plan.config.cells().len();
    eprintln!(
        "{}: {cells} cell(s) x {} samples, seed {}, workers {}",
        plan.name,
        plan.config.samples_per_cell,
        plan.config.master_seed,
        plan.config.workers.resolve()?
    );
    let outcome = execute(&plan, force)?;
    let table = outcome.table().clone();
    match outcome {
        RunOutcome::UpToDate { .. } => {
            eprintln!("{} is up to date; nothing to do", table.display());
        }
        RunOutcome::Completed { .. } => {
            eprintln!("wrote {}", table.display());
        }
    }
    let bytes = std::fs::read(&table).with_context(|| format!("reading {}", table.display()))?;
    std::io::stdout().write_all(&bytes)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::ScanRank { d1, d2, k, sweep } => {
            let file = load_file(&sweep.config)?;
            let d1 = required(d1, file.d1, "d1")?;
            let d2 = match (d2, file.d2) {
                (Some(v), _) => v,
                (None, Some(r)) if r.start == r.end => r.start,
                (None, Some(r)) => return Err(anyhow!("scan-rank needs a single d2, got {r}")),
                (None, None) => return Err(anyhow!("--d2 is required (flag or config file)")),
            };
            let floor = if sweep.allow_rank_one { 1 } else { 2 };
            let k = k.or(file.k).unwrap_or(IntRange { start: floor, end: d1 * d2 });
            let plan = RunPlan::scan_rank(&template(&sweep, &file), d1, d2, k)?;
            run_plan(plan, sweep.force)
        }
        Command::ScanDim { d1, k, d2, sweep } => {
            let file = load_file(&sweep.config)?;
            let d1 = required(d1, file.d1, "d1")?;
            let k = match (k, file.k) {
                (Some(v), _) => v,
                (None, Some(r)) if r.start == r.end => r.start,
                (None, Some(r)) => return Err(anyhow!("scan-dim needs a single k, got {r}")),
                (None, None) => return Err(anyhow!("--k is required (flag or config file)")),
            };
            let d2 = required(d2, file.d2, "d2")?;
            let plan = RunPlan::scan_dim(&template(&sweep, &file), d1, d2, k)?;
            run_plan(plan, sweep.force)
        }
        Command::Asymmetry { d12, sweep } => {
            let file = load_file(&sweep.config)?;
            let d12 = required(d12, file.d12, "d12")?;
            let plan = RunPlan::asymmetry(&template(&sweep, &file), d12)?;
            run_plan(plan, sweep.force)
        }
        Command::Bounds { d1, d2 } => {
            print!("{}", bounds_report(d1, d2)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { samples, seed, eps, workers, config } => {
            let file = load_file(&config)?;
            let defaults = VerifyOptions::default();
            let opts = VerifyOptions {
                samples: samples.or(file.samples).unwrap_or(DEFAULT_VERIFY_SAMPLES),
                seed: seed.or(file.seed).unwrap_or(defaults.seed),
                eps: eps.or(file.eps).unwrap_or(defaults.eps),
                workers: workers.or(file.workers).unwrap_or(defaults.workers),
                ..defaults
            };
            eprintln!(
                "verifying {} cell(s) x {} samples, seed {}",
                opts.cells.len(),
                opts.samples,
                opts.seed
            );
            let report = run_verify(&opts)?;
            print!("{report}");
            if report.passed() {
                println!("all invariants hold");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("invariant failures detected");
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Check { out } => {
            let entries = audit_dir(&out)?;
            let mut bad = 0;
            for e in &entries {
                let p = e.table.display();
                match &e.status {
                    TableStatus::Valid(_) => println!("ok       {p}"),
                    TableStatus::Orphan => println!("ORPHAN   {p} (no manifest)"),
                    TableStatus::MissingTable => println!("CORRUPT  {p} (manifest without table)"),
                    TableStatus::Corrupt(why) => println!("CORRUPT  {p} ({why})"),
                    TableStatus::Absent => continue,
                }
                if !e.is_valid() {
                    bad += 1;
                }
            }
            println!("{} table(s), {bad} invalid", entries.len());
            Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
