//! Executable invariant suites over sampled states.
//!
//! Each check either bounds a measured deviation (`worst ≤ limit`) or counts
//! violations of a logical property. Tallies combine by max and integer
//! sums, so the report is independent of scheduling.

use std::fmt;

use entdetect_core::analytics::average_purity;
use entdetect_core::criteria::{evaluate_state, ln_threshold, reduction_operators};
use entdetect_core::qmat::{
    hermitian_spectrum, partial_trace, partial_transpose, partial_transpose_matrix, purity,
    realign, trace_norm,
};
use entdetect_core::sampling::{haar_unitary, sample_reduced_state, RngStream, RANK_TOL};
use entdetect_core::{Criterion, DensityMatrix, SampleSpec, Subsystem};
use rayon::prelude::*;

use crate::config::{Cell, Workers};
use crate::error::Result;
use crate::sweep::{with_pool, BLOCK_SIZE};

pub const DEFAULT_VERIFY_SAMPLES: u64 = 1000;
/// Re-draw attempt number reserved for the local unitaries of a trial.
const UNITARY_ATTEMPT: u32 = u32::MAX;
/// Allowed deviation of the empirical mean purity, in standard errors.
const PURITY_SIGMAS: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    Trace,
    Positivity,
    RankCeiling,
    PtInvolution,
    PtSpectra,
    RealignFrobenius,
    RealignPurityBound,
    MarginalTrace,
    FiniteWitnesses,
    EntropyImpliesMajorization,
    ReductionImpliesPt,
    LnPtConsistency,
    QubitReductionPt,
    QubitReductionSpectrum,
    LocalUnitary,
    MeanPurity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CheckKind {
    /// Largest measured deviation must not exceed the limit.
    Bound(f64),
    /// No sample may violate the property.
    Count,
}

impl Check {
    pub const ALL: [Check; 16] = [
        Check::Trace,
        Check::Positivity,
        Check::RankCeiling,
        Check::PtInvolution,
        Check::PtSpectra,
        Check::RealignFrobenius,
        Check::RealignPurityBound,
        Check::MarginalTrace,
        Check::FiniteWitnesses,
        Check::EntropyImpliesMajorization,
        Check::ReductionImpliesPt,
        Check::LnPtConsistency,
        Check::QubitReductionPt,
        Check::QubitReductionSpectrum,
        Check::LocalUnitary,
        Check::MeanPurity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Trace => "unit trace",
            Check::Positivity => "positive semidefinite",
            Check::RankCeiling => "rank at most k",
            Check::PtInvolution => "partial transpose involution",
            Check::PtSpectra => "T1 and T2 spectra agree",
            Check::RealignFrobenius => "realignment keeps Frobenius norm",
            Check::RealignPurityBound => "realignment norm <= d1 sqrt(purity)",
            Check::MarginalTrace => "marginal spectra sum to one",
            Check::FiniteWitnesses => "witnesses finite",
            Check::EntropyImpliesMajorization => "E implies M",
            Check::ReductionImpliesPt => "Rd implies PT",
            Check::LnPtConsistency => "LN above threshold iff PT",
            Check::QubitReductionPt => "2xd: Rd iff PT",
            Check::QubitReductionSpectrum => "2xd: I (x) rho2 - rho ~ rho^T1",
            Check::LocalUnitary => "local-unitary invariance",
            Check::MeanPurity => "mean purity (standard errors)",
        }
    }

    pub fn kind(self) -> CheckKind {
        match self {
            Check::Trace => CheckKind::Bound(1e-10),
            Check::Positivity => CheckKind::Bound(1e-10),
            Check::PtInvolution => CheckKind::Bound(1e-14),
            Check::PtSpectra => CheckKind::Bound(1e-10),
            Check::RealignFrobenius => CheckKind::Bound(1e-12),
            Check::RealignPurityBound => CheckKind::Bound(1e-9),
            Check::MarginalTrace => CheckKind::Bound(1e-9),
            Check::QubitReductionSpectrum => CheckKind::Bound(1e-9),
            Check::LocalUnitary => CheckKind::Bound(1e-9),
            Check::MeanPurity => CheckKind::Bound(PURITY_SIGMAS),
            _ => CheckKind::Count,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Running result of one check.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tally {
    /// Largest deviation seen (bounds) or signed excess over the bound.
    pub worst: f64,
    pub violations: u64,
    pub evaluated: u64,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        self.worst = self.worst.max(other.worst);
        self.violations += other.violations;
        self.evaluated += other.evaluated;
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
struct Tallies {
    t: [Tally; Check::ALL.len()],
}

impl Tallies {
    fn measure(&mut self, check: Check, value: f64) {
        let t = &mut self.t[check.index()];
        t.evaluated += 1;
        let limit = match check.kind() {
            CheckKind::Bound(l) => l,
            CheckKind::Count => unreachable!("{check:?} is a count"),
        };
        // NaN counts as a violation and poisons `worst`.
        if value.is_nan() || value > limit {
            t.violations += 1;
        }
        t.worst = if value.is_nan() { f64::INFINITY } else { t.worst.max(value) };
    }

    fn holds(&mut self, check: Check, ok: bool) {
        let t = &mut self.t[check.index()];
        t.evaluated += 1;
        if !ok {
            t.violations += 1;
            t.worst = t.violations as f64;
        }
    }

    fn merge(&mut self, other: &Tallies) {
        for (a, b) in self.t.iter_mut().zip(&other.t) {
            a.merge(b);
        }
    }
}

fn max_spectrum_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn probe_state(rho: &DensityMatrix, spec: SampleSpec, eps: f64, out: &mut Tallies) -> Result<()> {
    let (d1, d2) = (spec.d1, spec.d2);
    out.measure(Check::Trace, (rho.matrix().trace().re - 1.0).abs());
    out.measure(Check::Positivity, (-rho.spectrum().min()).max(0.0));
    out.holds(Check::RankCeiling, rho.spectrum().numerical_rank(RANK_TOL) <= spec.k);

    let t1 = partial_transpose(rho, Subsystem::First);
    let t2 = partial_transpose(rho, Subsystem::Second);
    let back = partial_transpose_matrix(&t1, d1, d2, Subsystem::First)?;
    out.measure(Check::PtInvolution, back.max_abs_diff(rho.matrix()));
    let s1 = hermitian_spectrum(&t1)?;
    let s2 = hermitian_spectrum(&t2)?;
    out.measure(Check::PtSpectra, max_spectrum_gap(s1.eigenvalues(), s2.eigenvalues()));

    let g = realign(rho);
    out.measure(
        Check::RealignFrobenius,
        (g.frobenius_norm() - rho.matrix().frobenius_norm()).abs(),
    );
    let bound = d1.min(d2) as f64 * purity(rho).sqrt();
    out.measure(Check::RealignPurityBound, trace_norm(&g)? - bound);

    for s in [Subsystem::First, Subsystem::Second] {
        let r = partial_trace(rho, s)?;
        out.measure(Check::MarginalTrace, (r.spectrum().sum() - 1.0).abs());
    }

    let record = evaluate_state(rho, spec, eps)?;
    let det = |c| record.detected(c);
    out.holds(
        Check::FiniteWitnesses,
        record.ln.is_finite() && record.verdicts.iter().all(|v| v.witness.is_finite()),
    );
    out.holds(
        Check::EntropyImpliesMajorization,
        !det(Criterion::Entropy) || det(Criterion::Majorization),
    );
    out.holds(
        Check::ReductionImpliesPt,
        !det(Criterion::Reduction) || det(Criterion::PartialTranspose),
    );
    out.holds(
        Check::LnPtConsistency,
        (record.ln > ln_threshold(eps)) == det(Criterion::PartialTranspose),
    );

    if d1 == 2 {
        out.holds(
            Check::QubitReductionPt,
            det(Criterion::Reduction) == det(Criterion::PartialTranspose),
        );
        let [_, second] = reduction_operators(rho)?;
        let red = hermitian_spectrum(&second)?;
        out.measure(
            Check::QubitReductionSpectrum,
            max_spectrum_gap(red.eigenvalues(), s1.eigenvalues()),
        );
    }

    let mut stream = RngStream::substream(spec.master_seed, spec.trial_index, UNITARY_ATTEMPT);
    let u = haar_unitary::<f64>(d1, &mut stream).kron(&haar_unitary(d2, &mut stream));
    let rotated = evaluate_state(&rho.conjugate_by(&u)?, spec, eps)?;
    let mut gap = (rotated.ln - record.ln).abs();
    for c in Criterion::ALL {
        gap = gap.max((rotated.verdict(c).witness - record.verdict(c).witness).abs());
    }
    out.measure(Check::LocalUnitary, gap);
    Ok(())
}

/// Per-cell purity sums for the ensemble check.
#[derive(Clone, Copy, Debug, Default)]
struct PuritySums {
    n: u64,
    sum: f64,
    sq: f64,
}

fn run_block(cell: Cell, first: u64, len: u64, seed: u64, eps: f64) -> Result<(Tallies, PuritySums)> {
    let mut tallies = Tallies::default();
    let mut p = PuritySums::default();
    for t in first..first + len {
        let spec = SampleSpec::new(cell.d1, cell.d2, cell.k, seed, t)?;
        let rho = sample_reduced_state::<f64>(&spec)?;
        let pur = purity(&rho);
        p.n += 1;
        p.sum += pur;
        p.sq += pur * pur;
        probe_state(&rho, spec, eps, &mut tallies)?;
    }
    Ok((tallies, p))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub cells: Vec<Cell>,
    pub samples: u64,
    pub seed: u64,
    pub eps: f64,
    pub workers: Workers,
}

impl VerifyOptions {
    /// `2⊗3, 2⊗4, 2⊗5, 2⊗6, 3⊗3, 3⊗5` at ranks `2`, `4`, `⌈d1d2/2⌉` and
    /// `d1d2`.
    pub fn default_cells() -> Vec<Cell> {
        let mut cells = Vec::new();
        for (d1, d2) in [(2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (3, 5)] {
            let n: usize = d1 * d2;
            let mut ks = vec![2, 4, n.div_ceil(2), n];
            ks.sort_unstable();
            ks.dedup();
            cells.extend(ks.into_iter().map(|k| Cell { d1, d2, k }));
        }
        cells
    }
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            cells: Self::default_cells(),
            samples: DEFAULT_VERIFY_SAMPLES,
            seed: 0,
            eps: entdetect_core::sampling::DEFAULT_EPS,
            workers: Workers::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub check: Check,
    pub tally: Tally,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.tally.violations == 0
    }

    /// Distance to the limit for bounded checks.
    pub fn margin(&self) -> Option<f64> {
        match self.check.kind() {
            CheckKind::Bound(l) => Some(l - self.tally.worst),
            CheckKind::Count => None,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let t = &self.tally;
        write!(f, "{verdict} {:<40}", self.check.name())?;
        match self.check.kind() {
            CheckKind::Bound(l) => write!(
                f,
                " worst {:.3e}  limit {l:.1e}  margin {:.3e}  ({} evaluated)",
                t.worst,
                l - t.worst,
                t.evaluated
            ),
            CheckKind::Count => write!(f, " violations {}/{}", t.violations, t.evaluated),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub results: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn get(&self, check: Check) -> &CheckResult {
        &self.results[check.index()]
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Sample `samples` states in every cell and run all checks on each.
pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut blocks = Vec::new();
    for (i, &cell) in opts.cells.iter().enumerate() {
        SampleSpec::new(cell.d1, cell.d2, cell.k, opts.seed, 0)?;
        let base = i as u64 * opts.samples;
        let mut start = 0;
        while start < opts.samples {
            let len = BLOCK_SIZE.min(opts.samples - start);
            blocks.push((i, base + start, len));
            start += len;
        }
    }
    let workers = opts.workers.resolve()?;
    let partials = with_pool(workers, || {
        blocks
            .par_iter()
            .map(|&(i, first, len)| run_block(opts.cells[i], first, len, opts.seed, opts.eps))
            .collect::<Result<Vec<_>>>()
    })??;

    let mut tallies = Tallies::default();
    let mut purity = vec![PuritySums::default(); opts.cells.len()];
    for (&(i, _, _), (t, p)) in blocks.iter().zip(&partials) {
        tallies.merge(t);
        let acc = &mut purity[i];
        acc.n += p.n;
        acc.sum += p.sum;
        acc.sq += p.sq;
    }
    for (cell, p) in opts.cells.iter().zip(&purity) {
        if p.n < 2 {
            continue;
        }
        let n = p.n as f64;
        let mean = p.sum / n;
        let se = ((p.sq / n - mean * mean).max(0.0) / (n - 1.0)).sqrt();
        let dev = (mean - average_purity(cell.d1, cell.d2, cell.k)).abs();
        // Pure states (k = 1) have zero spread; compare exactly.
        let z = if se > 0.0 { dev / se } else if dev < 1e-12 { 0.0 } else { f64::INFINITY };
        tallies.measure(Check::MeanPurity, z);
    }
    Ok(VerifyReport {
        results: Check::ALL
            .into_iter()
            .map(|check| CheckResult {
                check,
                tally: tallies.t[check.index()],
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_are_indexed_in_order() {
        for (i, c) in Check::ALL.iter().enumerate() {
            assert_eq!(c.index(), i);
        }
    }

    #[test]
    fn small_run_passes() {
        let opts = VerifyOptions {
            cells: vec![Cell { d1: 2, d2: 3, k: 2 }, Cell { d1: 3, d2: 3, k: 5 }],
            samples: 40,
            workers: Workers::Count(1),
            ..Default::default()
        };
        let report = run_verify(&opts).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.get(Check::Trace).tally.evaluated, 80);
        assert_eq!(report.get(Check::QubitReductionPt).tally.evaluated, 40);
        assert_eq!(report.get(Check::MeanPurity).tally.evaluated, 2);
    }

    #[test]
    fn tallies_flag_nan_and_excess() {
        let mut t = Tallies::default();
        t.measure(Check::Trace, 1e-12);
        t.measure(Check::Trace, f64::NAN);
        t.holds(Check::ReductionImpliesPt, false);
        assert_eq!(t.t[Check::Trace.index()].violations, 1);
        assert!(t.t[Check::Trace.index()].worst.is_infinite());
        assert_eq!(t.t[Check::ReductionImpliesPt.index()].violations, 1);
    }
}
