//! Exact Fitting: a line through the largest number of input points, found by
//! binary search over the richness threshold.

use crate::error::{Error, Result};
use crate::geom::{line_through_distinct, CanonicalLine, PointSet};
use crate::rich_lines::{compute_params, det_points, rand_points, RichLineReport};
use crate::sampling::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitMode {
    Rand,
    Det,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FitResult {
    pub line: CanonicalLine,
    pub count: usize,
}

/// Largest threshold with a non-empty report wins. In [`FitMode::Rand`] each
/// probe uses its own child generator and an aborted probe is repeated with
/// the exact engine. Ties between maximum lines go to the smallest line.
pub fn exact_fit(s: &PointSet, mode: FitMode, rng: &mut SeededRng) -> Result<FitResult> {
    let n = s.len();
    if n < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            actual: n,
        });
    }
    let pts = s.as_slice();
    if n == 2 {
        return Ok(FitResult {
            line: line_through_distinct(pts[0], pts[1]),
            count: 2,
        });
    }

    let mut probe_index = 0u64;
    let mut probe = |lambda: usize| -> RichLineReport {
        probe_index += 1;
        match mode {
            FitMode::Det => det_points(pts, lambda),
            FitMode::Rand => {
                let params = compute_params(n, lambda).expect("probe threshold is within [2, n]");
                let report = rand_points(pts, lambda, &params, &mut rng.fork(probe_index));
                if report.aborted {
                    det_points(pts, lambda)
                } else {
                    report
                }
            }
        }
    };

    // Every pair spans a 2-rich line, so the answer lies in [2, n].
    let (mut lo, mut hi) = (2, n);
    let mut best: Option<RichLineReport> = None;
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        let report = probe(mid);
        if report.is_empty() {
            hi = mid - 1;
        } else {
            lo = mid;
            best = Some(report);
        }
    }
    let best = match best {
        Some(report) => report,
        None => det_points(pts, 2),
    };
    let top = best
        .lines
        .iter()
        .max_by(|a, b| a.count.cmp(&b.count).then(b.line.cmp(&a.line)))
        .expect("a report kept by the search is non-empty");
    Ok(FitResult {
        line: top.line,
        count: top.count,
    })
}
