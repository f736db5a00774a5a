//! Per-cell figures of merit and closed-form predictors.
//!
//! For one `(d1, d2, k)` cell the NPT population is the set of records whose
//! partial-transpose verdict fired and whose logarithmic negativity exceeds
//! [`ln_threshold`]`(eps)`. Within it, for each criterion:
//!
//! * `F` is the detected fraction, with Bernoulli standard error `√(F(1−F)/n)`;
//! * `M` is the mean negativity of the detected records;
//! * `m` is their minimum negativity.
//!
//! `M` and `m` are `None` when nothing is detected, `F` when the population
//! is empty. Sums use Neumaier compensation so that sharded accumulation
//! merged in any order agrees with a single pass to round-off.

use serde::{Deserialize, Serialize};

use crate::criteria::{ln_threshold, Criterion, StateRecord};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionStats {
    pub criterion: Criterion,
    pub n_detected: u64,
    pub fraction: Option<f64>,
    pub fraction_stderr: Option<f64>,
    pub mean_ln: Option<f64>,
    pub min_ln: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepStats {
    pub d1: usize,
    pub d2: usize,
    pub k: usize,
    pub n_total: u64,
    /// Size of the NPT population, the denominator of every `F`.
    pub n_npt: u64,
    pub criteria: [CriterionStats; 5],
}

impl SweepStats {
    pub fn get(&self, c: Criterion) -> &CriterionStats {
        &self.criteria[c.index()]
    }

    pub fn fraction(&self, c: Criterion) -> Option<f64> {
        self.get(c).fraction
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct CriterionAccumulator {
    n_detected: u64,
    ln_sum: CompensatedSum,
    ln_min: Option<f64>,
}

impl CriterionAccumulator {
    fn push(&mut self, ln: f64) {
        self.n_detected += 1;
        self.ln_sum.add(ln);
        self.ln_min = Some(self.ln_min.map_or(ln, |m| m.min(ln)));
    }

    fn merge(&mut self, other: &Self) {
        self.n_detected += other.n_detected;
        self.ln_sum.merge(&other.ln_sum);
        self.ln_min = match (self.ln_min, other.ln_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

/// Associative accumulator behind [`aggregate`]; shards can be filled
/// independently and merged.
#[derive(Clone, Debug, PartialEq)]
pub struct StatsAccumulator {
    cell: (usize, usize, usize),
    ln_threshold: f64,
    n_total: u64,
    n_npt: u64,
    per: [CriterionAccumulator; 5],
}

impl StatsAccumulator {
    pub fn new(d1: usize, d2: usize, k: usize, eps: f64) -> Self {
        Self {
            cell: (d1, d2, k),
            ln_threshold: ln_threshold(eps),
            n_total: 0,
            n_npt: 0,
            per: Default::default(),
        }
    }

    fn check_cell(&self, found: (usize, usize, usize)) -> Result<()> {
        if found != self.cell {
            return Err(Error::MixedCells {
                expected: self.cell,
                found,
            });
        }
        Ok(())
    }

    /// Whether `record` belongs to the NPT population.
    pub fn in_population<T: Real>(&self, record: &StateRecord<T>) -> bool {
        record.detected(Criterion::PartialTranspose) && record.ln.as_f64() > self.ln_threshold
    }

    pub fn push<T: Real>(&mut self, record: &StateRecord<T>) -> Result<()> {
        self.check_cell((record.spec.d1, record.spec.d2, record.spec.k))?;
        self.n_total += 1;
        if !self.in_population(record) {
            return Ok(());
        }
        self.n_npt += 1;
        let ln = record.ln.as_f64();
        for c in Criterion::ALL {
            if record.detected(c) {
                self.per[c.index()].push(ln);
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        self.check_cell(other.cell)?;
        self.n_total += other.n_total;
        self.n_npt += other.n_npt;
        for (a, b) in self.per.iter_mut().zip(other.per.iter()) {
            a.merge(b);
        }
        Ok(())
    }

    pub fn n_total(&self) -> u64 {
        self.n_total
    }

    pub fn finish(&self) -> SweepStats {
        let n = self.n_npt;
        let criteria = Criterion::ALL.map(|c| {
            let acc = &self.per[c.index()];
            let fraction = (n > 0).then(|| acc.n_detected as f64 / n as f64);
            let detected = acc.n_detected > 0;
            CriterionStats {
                criterion: c,
                n_detected: acc.n_detected,
                fraction,
                fraction_stderr: fraction.map(|f| (f * (1.0 - f) / n as f64).sqrt()),
                mean_ln: detected.then(|| acc.ln_sum.value() / acc.n_detected as f64),
                min_ln: acc.ln_min,
            }
        });
        SweepStats {
            d1: self.cell.0,
            d2: self.cell.1,
            k: self.cell.2,
            n_total: self.n_total,
            n_npt: n,
            criteria,
        }
    }
}

/// Figures of merit for records that all share one `(d1, d2, k)` cell.
pub fn aggregate<T: Real>(records: &[StateRecord<T>], eps: f64) -> Result<SweepStats> {
    let first = records.first().ok_or(Error::EmptyRecords)?;
    let mut acc = StatsAccumulator::new(first.spec.d1, first.spec.d2, first.spec.k, eps);
    for r in records {
        acc.push(r)?;
    }
    Ok(acc.finish())
}

/// Criteria grouped by equal `F`, groups in descending `F`; within a group
/// the fixed enum order is kept. Criteria with undefined `F` form a trailing
/// group.
pub fn hierarchy_order(stats: &SweepStats) -> Vec<Vec<Criterion>> {
    let mut defined: Vec<(Criterion, f64)> = Criterion::ALL
        .into_iter()
        .filter_map(|c| stats.fraction(c).map(|f| (c, f)))
        .collect();
    defined.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut groups: Vec<Vec<Criterion>> = Vec::new();
    let mut last: Option<f64> = None;
    for (c, f) in defined {
        match (last, groups.last_mut()) {
            (Some(l), Some(g)) if l == f => g.push(c),
            _ => groups.push(vec![c]),
        }
        last = Some(f);
    }
    let undefined: Vec<Criterion> = Criterion::ALL
        .into_iter()
        .filter(|&c| stats.fraction(c).is_none())
        .collect();
    if !undefined.is_empty() {
        groups.push(undefined);
    }
    groups
}

/// Haar-average entropies in nats: `(⟨S₁⟩, ⟨S₂⟩, ⟨S₁₂⟩)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PageEntropies {
    pub s1: f64,
    pub s2: f64,
    pub s12: f64,
}

pub fn page_entropies(d1: usize, d2: usize, k: usize) -> PageEntropies {
    let (a, b, k) = (d1 as f64, d2 as f64, k as f64);
    PageEntropies {
        s1: a.ln() - a / (2.0 * b * k),
        s2: b.ln() - b / (2.0 * a * k),
        s12: k.ln() - k / (2.0 * a * b),
    }
}

/// `k`-derivatives of `⟨S₁₂⟩ − ⟨S₂⟩` and `⟨S₂⟩ − ⟨S₁⟩`.
pub fn page_gap_derivatives(d1: usize, d2: usize, k: f64) -> (f64, f64) {
    let (a, b) = (d1 as f64, d2 as f64);
    let denom = 2.0 * a * b * k * k;
    (
        (2.0 * a * b * k - k * k - b * b) / denom,
        (b * b - a * a) / denom,
    )
}

/// `max(d1, d2)`: above this rank the entropy criterion fails on Haar average.
pub fn entropy_rank_threshold(d1: usize, d2: usize) -> usize {
    d1.max(d2)
}

/// `(d1³d2 − 1) / (d1(d2 − d1))` with `d1 ≤ d2` (arguments are ordered
/// here); `+∞` for equal dimensions.
pub fn realignment_rank_bound(d1: usize, d2: usize) -> f64 {
    let (a, b) = (d1.min(d2) as f64, d1.max(d2) as f64);
    if a == b {
        return f64::INFINITY;
    }
    (a.powi(3) * b - 1.0) / (a * (b - a))
}

/// `d1d2(d1d2 − 1) − 1`: ranks at or above this guarantee a PPT state.
pub fn ppt_rank_sufficient(d1: usize, d2: usize) -> u64 {
    let n = (d1 * d2) as u64;
    n * (n - 1) - 1
}

/// `(d1d2 + k) / (d1d2·k + 1)`.
pub fn average_purity(d1: usize, d2: usize, k: usize) -> f64 {
    let n = (d1 * d2) as f64;
    let k = k as f64;
    (n + k) / (n * k + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryPrediction {
    pub s1_avg: f64,
    pub s2_avg: f64,
    pub s12_avg: f64,
    pub purity_avg: f64,
    pub entropy_rank_threshold: usize,
    pub realignment_rank_bound: f64,
    pub ppt_rank_sufficient: u64,
}

impl TheoryPrediction {
    pub fn new(d1: usize, d2: usize, k: usize) -> Self {
        let p = page_entropies(d1, d2, k);
        Self {
            s1_avg: p.s1,
            s2_avg: p.s2,
            s12_avg: p.s12,
            purity_avg: average_purity(d1, d2, k),
            entropy_rank_threshold: entropy_rank_threshold(d1, d2),
            realignment_rank_bound: realignment_rank_bound(d1, d2),
            ppt_rank_sufficient: ppt_rank_sufficient(d1, d2),
        }
    }
}
