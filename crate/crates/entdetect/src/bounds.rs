//! Closed-form predictors for one `d1 ⊗ d2`.

use std::fmt::Write;

use entdetect_core::analytics::{
    average_purity, entropy_rank_threshold, page_entropies, ppt_rank_sufficient,
    realignment_rank_bound,
};

use crate::error::{HarnessError, Result};
use crate::table::fmt_sig;

/// Realignment bound as printed: a number, or a note when it is vacuous.
pub fn realignment_bound_text(d1: usize, d2: usize) -> String {
    let b = realignment_rank_bound(d1, d2);
    if b.is_finite() {
        fmt_sig(b)
    } else {
        "vacuous (equal dimensions)".into()
    }
}

pub fn bounds_report(d1: usize, d2: usize) -> Result<String> {
    if d1 < 2 || d2 < 2 {
        return Err(HarnessError::Config(format!(
            "dimensions {d1}x{d2} must both be at least 2"
        )));
    }
    let mut s = String::new();
    let n = d1 * d2;
    writeln!(s, "bounds for {d1}x{d2}").unwrap();
    writeln!(s, "entropy_rank_threshold  {}", entropy_rank_threshold(d1, d2)).unwrap();
    writeln!(s, "realignment_rank_bound  {}", realignment_bound_text(d1, d2)).unwrap();
    writeln!(s, "ppt_rank_sufficient     {}", ppt_rank_sufficient(d1, d2)).unwrap();
    writeln!(s).unwrap();
    writeln!(s, "{:>4}  {:>10}  {:>10}  {:>10}  {:>10}", "k", "S1", "S2", "S12", "purity").unwrap();
    for k in 1..=n {
        let p = page_entropies(d1, d2, k);
        writeln!(
            s,
            "{k:>4}  {:>10}  {:>10}  {:>10}  {:>10}",
            fmt_sig(p.s1),
            fmt_sig(p.s2),
            fmt_sig(p.s12),
            fmt_sig(average_purity(d1, d2, k))
        )
        .unwrap();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_lines() {
        let r = bounds_report(2, 5).unwrap();
        assert!(r.contains("entropy_rank_threshold  5\n"));
        assert!(r.contains("realignment_rank_bound  6.5\n"));
        assert!(r.contains("ppt_rank_sufficient     89\n"));
        assert_eq!(r.lines().count(), 6 + 10);
        let r = bounds_report(3, 3).unwrap();
        assert!(r.contains("vacuous (equal dimensions)"));
        assert!(bounds_report(2, 2).unwrap().contains("ppt_rank_sufficient     11\n"));
        assert!(bounds_report(1, 4).is_err());
    }
}
