use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use entdetect_core::sampling::DEFAULT_EPS;
use entdetect_core::Criterion;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{io_err, HarnessError, Result};

pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const MIN_SAMPLES: u64 = 100;
/// Overrides the configured worker count when set.
pub const WORKERS_ENV: &str = "ENTDETECT_WORKERS";

/// One `(d1, d2)` pair swept over the inclusive rank range `k_min..=k_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEntry {
    pub d1: usize,
    pub d2: usize,
    pub k_min: usize,
    pub k_max: usize,
}

/// A single `(d1, d2, k)` cell of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub d1: usize,
    pub d2: usize,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Workers {
    #[default]
    Auto,
    Count(usize),
}

impl Workers {
    /// Thread count after applying the environment override; `Auto` uses
    /// the available parallelism.
    pub fn resolve(self) -> Result<usize> {
        let chosen = match std::env::var(WORKERS_ENV) {
            Ok(v) if !v.trim().is_empty() => v
                .parse::<Workers>()
                .map_err(|e| HarnessError::Config(format!("{WORKERS_ENV}: {e}")))?,
            _ => self,
        };
        Ok(match chosen {
            Workers::Count(n) => n,
            Workers::Auto => std::thread::available_parallelism().map_or(1, |n| n.get()),
        })
    }
}

impl FromStr for Workers {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Workers::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Workers::Count(n)),
            _ => Err(format!("expected a positive integer or \"auto\", got {s:?}")),
        }
    }
}

impl fmt::Display for Workers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Workers::Auto => f.write_str("auto"),
            Workers::Count(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for Workers {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Workers::Auto => s.serialize_str("auto"),
            Workers::Count(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Workers {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Workers::from_str(&n.to_string()),
            Raw::Text(t) => Workers::from_str(&t),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Inclusive integer range written `a..b`, `a..=b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad range bound {t:?} in {s:?}"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(IntRange { start, end })
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl Serialize for IntRange {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(IntRange { start: n, end: n }),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid: Vec<GridEntry>,
    pub samples_per_cell: u64,
    pub master_seed: u64,
    pub eps: f64,
    pub output_dir: PathBuf,
    pub criteria: Vec<Criterion>,
    pub workers: Workers,
    /// Permit `k = 1` cells, which are pure states and only useful for
    /// calibration.
    #[serde(default)]
    pub allow_rank_one: bool,
}

impl SweepConfig {
    pub fn new(grid: Vec<GridEntry>) -> Self {
        Self {
            grid,
            samples_per_cell: DEFAULT_SAMPLES,
            master_seed: 0,
            eps: DEFAULT_EPS,
            output_dir: PathBuf::from("runs"),
            criteria: Criterion::ALL.to_vec(),
            workers: Workers::Auto,
            allow_rank_one: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.grid.is_empty() {
            return bad("empty grid".into());
        }
        if self.samples_per_cell < MIN_SAMPLES {
            return bad(format!(
                "samples_per_cell = {} is below the minimum {MIN_SAMPLES}",
                self.samples_per_cell
            ));
        }
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return bad(format!("eps must be finite and non-negative, got {}", self.eps));
        }
        if self.criteria.is_empty() {
            return bad("no criteria selected".into());
        }
        if let Workers::Count(0) = self.workers {
            return bad("workers must be positive".into());
        }
        let k_floor = if self.allow_rank_one { 1 } else { 2 };
        for g in &self.grid {
            if g.d1 < 2 || g.d2 < 2 {
                return bad(format!("dimensions {}x{} must both be at least 2", g.d1, g.d2));
            }
            let n = g.d1 * g.d2;
            if g.k_min > g.k_max || g.k_min < k_floor || g.k_max > n {
                return bad(format!(
                    "rank range {}..{} for {}x{} must lie within [{k_floor}, {n}]",
                    g.k_min, g.k_max, g.d1, g.d2
                ));
            }
        }
        Ok(())
    }

    /// Cells in grid order, ranks ascending within each entry.
    pub fn cells(&self) -> Vec<Cell> {
        self.grid
            .iter()
            .flat_map(|g| (g.k_min..=g.k_max).map(move |k| Cell { d1: g.d1, d2: g.d2, k }))
            .collect()
    }

    /// Criteria deduplicated and in canonical order.
    pub fn selected_criteria(&self) -> Vec<Criterion> {
        Criterion::ALL
            .into_iter()
            .filter(|c| self.criteria.contains(c))
            .collect()
    }

    /// The parts of the configuration that determine the results; worker
    /// count and output location do not.
    pub fn fingerprint(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = v.as_object_mut() {
            map.remove("workers");
            map.remove("output_dir");
        }
        v
    }
}

/// JSON configuration file. Keys mirror the command-line flags; flags take
/// precedence over values read here.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub d1: Option<usize>,
    pub d2: Option<IntRange>,
    pub k: Option<IntRange>,
    pub d12: Option<usize>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub criteria: Option<Vec<Criterion>>,
    pub workers: Option<Workers>,
    pub allow_rank_one: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|source| HarnessError::Json {
            path: path.to_owned(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(d1: usize, d2: usize, k_min: usize, k_max: usize) -> Vec<GridEntry> {
        vec![GridEntry { d1, d2, k_min, k_max }]
    }

    #[test]
    fn ranges_parse() {
        assert_eq!("2..10".parse(), Ok(IntRange { start: 2, end: 10 }));
        assert_eq!("2..=10".parse(), Ok(IntRange { start: 2, end: 10 }));
        assert_eq!("7".parse(), Ok(IntRange { start: 7, end: 7 }));
        assert!("5..2".parse::<IntRange>().is_err());
        assert!("a..2".parse::<IntRange>().is_err());
    }

    #[test]
    fn workers_parse_and_roundtrip() {
        assert_eq!("auto".parse(), Ok(Workers::Auto));
        assert_eq!("8".parse(), Ok(Workers::Count(8)));
        assert!("0".parse::<Workers>().is_err());
        for w in [Workers::Auto, Workers::Count(3)] {
            let s = serde_json::to_string(&w).unwrap();
            assert_eq!(serde_json::from_str::<Workers>(&s).unwrap(), w);
        }
    }

    #[test]
    fn validation_rules() {
        assert!(SweepConfig::new(grid(2, 5, 2, 10)).validate().is_ok());
        assert!(SweepConfig::new(grid(2, 5, 1, 10)).validate().is_err());
        assert!(SweepConfig::new(grid(2, 5, 2, 11)).validate().is_err());
        assert!(SweepConfig::new(grid(1, 5, 2, 3)).validate().is_err());
        let mut c = SweepConfig::new(grid(2, 5, 1, 10));
        c.allow_rank_one = true;
        assert!(c.validate().is_ok());
        c.samples_per_cell = 99;
        assert!(c.validate().is_err());
    }

    #[test]
    fn cells_follow_grid_order() {
        let mut c = SweepConfig::new(grid(2, 3, 2, 3));
        c.grid.push(GridEntry { d1: 2, d2: 2, k_min: 4, k_max: 4 });
        let ks: Vec<_> = c.cells().iter().map(|c| (c.d2, c.k)).collect();
        assert_eq!(ks, vec![(3, 2), (3, 3), (2, 4)]);
    }

    #[test]
    fn fingerprint_ignores_workers_and_output() {
        let a = SweepConfig::new(grid(2, 5, 2, 10));
        let mut b = a.clone();
        b.workers = Workers::Count(8);
        b.output_dir = "elsewhere".into();
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.master_seed = 1;
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn file_config_rejects_unknown_keys() {
        let ok: FileConfig = serde_json::from_str(r#"{"d1": 2, "k": "2..10", "workers": 4}"#).unwrap();
        assert_eq!(ok.k, Some(IntRange { start: 2, end: 10 }));
        assert_eq!(ok.workers, Some(Workers::Count(4)));
        assert!(serde_json::from_str::<FileConfig>(r#"{"dims": 2}"#).is_err());
    }
}
