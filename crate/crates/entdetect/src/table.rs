//! CSV results tables.
//!
//! Columns are `d1, d2, k, n, n_npt`, then `F_X, F_stderr_X, M_X, m_X` for
//! each selected criterion `X` (labels `PT, Rd, M, E, Rl`). Tables for a
//! fixed total dimension carry a leading `d12` column. Undefined values are
//! empty fields; numbers carry 6 significant digits.

use entdetect_core::analytics::SweepStats;
use entdetect_core::Criterion;

use crate::error::Result;
use crate::sweep::CellResult;

/// `x` rounded to 6 significant digits, printed in its shortest exact form.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

pub fn header(criteria: &[Criterion], with_d12: bool) -> Vec<String> {
    let mut h: Vec<String> = Vec::new();
    if with_d12 {
        h.push("d12".into());
    }
    h.extend(["d1", "d2", "k", "n", "n_npt"].map(String::from));
    for c in criteria {
        let l = c.label();
        h.extend([format!("F_{l}"), format!("F_stderr_{l}"), format!("M_{l}"), format!("m_{l}")]);
    }
    h
}

pub fn row(stats: &SweepStats, criteria: &[Criterion], with_d12: bool) -> Vec<String> {
    let mut r = Vec::new();
    if with_d12 {
        r.push((stats.d1 * stats.d2).to_string());
    }
    r.extend([
        stats.d1.to_string(),
        stats.d2.to_string(),
        stats.k.to_string(),
        stats.n_total.to_string(),
        stats.n_npt.to_string(),
    ]);
    for &c in criteria {
        let s = stats.get(c);
        r.extend([
            opt(s.fraction),
            opt(s.fraction_stderr),
            opt(s.mean_ln),
            opt(s.min_ln),
        ]);
    }
    r
}

pub fn render(results: &[CellResult], criteria: &[Criterion], with_d12: bool) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(criteria, with_d12))?;
    for cr in results {
        w.write_record(row(&cr.stats, criteria, with_d12))?;
    }
    w.into_inner().map_err(|e| csv::Error::from(e.into_error()).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use entdetect_core::analytics::aggregate;
    use entdetect_core::criteria::Verdict;
    use entdetect_core::{SampleSpec, StateRecord};

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.5100004), "0.51");
        assert_eq!(fmt_sig(0.40423456), "0.404235");
        assert_eq!(fmt_sig(123456789.0), "123457000");
        assert_eq!(fmt_sig(1.234567e-7), "0.000000123457");
        assert_eq!(fmt_sig(2.0 / 3.0), "0.666667");
    }

    #[test]
    fn nulls_are_empty_fields() {
        let spec = SampleSpec::new(2, 2, 2, 0, 0).unwrap();
        let rec = StateRecord {
            spec,
            ln: 0.0,
            verdicts: Criterion::ALL.map(|c| Verdict { criterion: c, detected: false, witness: 1.0 }),
        };
        let stats = aggregate(&[rec], 1e-10).unwrap();
        let r = row(&stats, &[Criterion::PartialTranspose], true);
        assert_eq!(r, vec!["4", "2", "2", "2", "1", "0", "", "", "", ""]);
        assert_eq!(
            header(&[Criterion::Realignment], false),
            vec!["d1", "d2", "k", "n", "n_npt", "F_Rl", "F_stderr_Rl", "M_Rl", "m_Rl"]
        );
    }
}
