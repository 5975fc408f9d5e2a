//! Rich Lines: every line containing at least `lambda` points of a set.
//!
//! Three engines share one report type:
//!
//! * [`rich_lines_brute`] enumerates all point pairs. It is the ground-truth
//!   oracle and is only meant for small inputs.
//! * [`rich_lines_det`] is the exact deterministic engine. For small `lambda`
//!   it groups, for every anchor point, the later points by direction. For
//!   larger `lambda` it splits the input into `lambda / 4` blocks: a line with
//!   `lambda` points then has at least `lambda - 2 * blocks` of them in blocks
//!   where it meets three or more points, so only lines found inside blocks
//!   need to be counted exactly.
//! * [`rich_lines_rand`] is the one-sided Monte Carlo algorithm: sample point
//!   pairs, optionally sub-sample the points to prune candidates, then filter
//!   exactly. Every line it reports is truly rich; with high probability it
//!   reports all of them.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::geom::{line_through_distinct, primitive_direction, CanonicalLine, IncidenceCount, Point, PointIndex, PointSet};
use crate::sampling::{sample_indices, sample_pair_indices, SeededRng};

/// Result of a rich-lines query. Lines are sorted by canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RichLineReport {
    pub lines: Vec<IncidenceCount>,
    pub lambda: usize,
    pub n: usize,
    /// Set when the randomized engine gave up because too many candidate
    /// lines survived sub-sampling. The line list is then empty.
    pub aborted: bool,
}

impl RichLineReport {
    fn from_lines(mut lines: Vec<IncidenceCount>, lambda: usize, n: usize) -> Self {
        lines.sort_unstable_by_key(|ic| ic.line);
        RichLineReport {
            lines,
            lambda,
            n,
            aborted: false,
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn canonical_lines(&self) -> Vec<CanonicalLine> {
        self.lines.iter().map(|ic| ic.line).collect()
    }
}

fn check_lambda(lambda: usize, n: usize) -> Result<()> {
    if lambda < 2 {
        return Err(Error::LambdaOutOfRange { lambda, n });
    }
    Ok(())
}

/// Ground truth by full pair enumeration.
pub fn rich_lines_brute(s: &PointSet, lambda: usize) -> Result<RichLineReport> {
    check_lambda(lambda, s.len())?;
    let pts = s.as_slice();
    let mut members: FxHashMap<CanonicalLine, Vec<u32>> = FxHashMap::default();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let entry = members.entry(line_through_distinct(pts[i], pts[j])).or_default();
            entry.push(i as u32);
            entry.push(j as u32);
        }
    }
    let lines = members
        .into_iter()
        .filter_map(|(line, mut idx)| {
            idx.sort_unstable();
            idx.dedup();
            (idx.len() >= lambda).then_some(IncidenceCount {
                line,
                count: idx.len(),
            })
        })
        .collect();
    Ok(RichLineReport::from_lines(lines, lambda, pts.len()))
}

/// Below this `lambda` the deterministic engine groups around every anchor.
const BLOCK_MODE_MIN_LAMBDA: usize = 6;

/// Exact deterministic rich lines.
pub fn rich_lines_det(s: &PointSet, lambda: usize) -> Result<RichLineReport> {
    check_lambda(lambda, s.len())?;
    Ok(det_points(s.as_slice(), lambda))
}

pub(crate) fn det_points(pts: &[Point], lambda: usize) -> RichLineReport {
    let n = pts.len();
    let lines = if lambda > n {
        Vec::new()
    } else if lambda < BLOCK_MODE_MIN_LAMBDA {
        anchor_grouping(pts, lambda)
    } else {
        block_candidates(pts, lambda)
    };
    RichLineReport::from_lines(lines, lambda, n)
}

/// For each anchor `i`, groups points `j > i` by direction. The first anchor
/// that sees a line is its lowest-indexed point, so that anchor's group holds
/// every other point of the line.
fn anchor_grouping(pts: &[Point], lambda: usize) -> Vec<IncidenceCount> {
    let n = pts.len();
    let mut found: FxHashMap<CanonicalLine, usize> = FxHashMap::default();
    let mut groups: FxHashMap<(i64, i64), u32> = FxHashMap::default();
    // A line with lambda points has its lowest index at most n - lambda.
    for i in 0..=(n - lambda) {
        groups.clear();
        let p = pts[i];
        for q in &pts[i + 1..] {
            *groups.entry(primitive_direction(q.x() - p.x(), q.y() - p.y())).or_default() += 1;
        }
        for (&(dx, dy), &t) in &groups {
            let count = t as usize + 1;
            if count >= lambda {
                let line = line_from_direction(p, dx, dy);
                found.entry(line).or_insert(count);
            }
        }
    }
    found
        .into_iter()
        .map(|(line, count)| IncidenceCount { line, count })
        .collect()
}

fn line_from_direction(p: Point, dx: i64, dy: i64) -> CanonicalLine {
    // (dx, dy) is primitive, so (dy, -dx, c) is already reduced.
    let (a, b) = (dy, -dx);
    let c = -((a as i128) * (p.x() as i128) + (b as i128) * (p.y() as i128));
    CanonicalLine::from_coefficients(a, b, c).expect("direction is non-zero")
}

/// Pigeonhole over `lambda / 4` consecutive blocks, then exact verification.
///
/// A block holding at most two points of a line contributes at most two of
/// its points, so a `lambda`-rich line gets at least `lambda - 2 * blocks`
/// points from blocks where it has three or more. Only those per-block counts
/// are kept, which keeps memory small unless the input is very degenerate.
fn block_candidates(pts: &[Point], lambda: usize) -> Vec<IncidenceCount> {
    let n = pts.len();
    let block_len = n.div_ceil(lambda / 4);
    let blocks = n.div_ceil(block_len);
    debug_assert!(2 * blocks < lambda);
    let min_points = lambda - 2 * blocks;

    let mut totals: FxHashMap<CanonicalLine, usize> = FxHashMap::default();
    let mut in_block: FxHashMap<CanonicalLine, usize> = FxHashMap::default();
    let mut groups: FxHashMap<(i64, i64), u32> = FxHashMap::default();
    for block in pts.chunks(block_len) {
        in_block.clear();
        for i in 0..block.len().saturating_sub(2) {
            groups.clear();
            let p = block[i];
            for q in &block[i + 1..] {
                *groups.entry(primitive_direction(q.x() - p.x(), q.y() - p.y())).or_default() += 1;
            }
            for (&(dx, dy), &t) in &groups {
                if t >= 2 {
                    // The lowest anchor of a line sees all of its block points.
                    in_block.entry(line_from_direction(p, dx, dy)).or_insert(t as usize + 1);
                }
            }
        }
        for (&line, &t) in &in_block {
            *totals.entry(line).or_default() += t;
        }
    }
    let mut candidates: Vec<CanonicalLine> = totals
        .into_iter()
        .filter(|&(_, t)| t >= min_points)
        .map(|(l, _)| l)
        .collect();
    candidates.sort_unstable();
    if candidates.is_empty() {
        return Vec::new();
    }
    let index = PointIndex::new(pts);
    candidates
        .into_iter()
        .filter_map(|line| {
            let count = index.count(&line);
            (count >= lambda).then_some(IncidenceCount { line, count })
        })
        .collect()
}

/// Which branch of the randomized algorithm handles a given `(n, lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `lambda < ln n`: run the deterministic engine.
    DeterministicSmall,
    /// `lambda <= 140 ln^{3/2} n`: filter the sampled pair lines directly.
    DirectFilter,
    /// Sub-sample with candidate cap `2500 n^2 / lambda^3` (`lambda < 5 sqrt n`).
    SubsampleLow,
    /// Sub-sample with candidate cap `5 n / lambda`.
    SubsampleHigh,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::DeterministicSmall,
        Regime::DirectFilter,
        Regime::SubsampleLow,
        Regime::SubsampleHigh,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomizedParams {
    pub regime: Regime,
    /// Number of sampled pairs, `ceil(10 n^2 ln n / lambda^2)`.
    pub x: u64,
    /// Sub-sample size `ceil(140 n ln n / lambda)`; sub-sampling regimes only.
    pub m: Option<u64>,
    /// Sub-sample richness threshold `98 ln n`; sub-sampling regimes only.
    pub y: Option<f64>,
    /// Cap on surviving candidates; sub-sampling regimes only.
    pub z: Option<f64>,
}

pub fn compute_params(n: usize, lambda: usize) -> Result<RandomizedParams> {
    if n < 3 {
        return Err(Error::TooFewPoints {
            required: 3,
            actual: n,
        });
    }
    if lambda < 2 || lambda > n {
        return Err(Error::LambdaOutOfRange { lambda, n });
    }
    let nf = n as f64;
    let lf = lambda as f64;
    let ln_n = nf.ln();
    let x = (10.0 * nf * nf * ln_n / (lf * lf)).ceil() as u64;
    let regime = if lf < ln_n {
        Regime::DeterministicSmall
    } else if lf <= 140.0 * ln_n.powf(1.5) {
        Regime::DirectFilter
    } else if lf < 5.0 * nf.sqrt() {
        Regime::SubsampleLow
    } else {
        Regime::SubsampleHigh
    };
    let (m, y, z) = match regime {
        Regime::DeterministicSmall | Regime::DirectFilter => (None, None, None),
        Regime::SubsampleLow | Regime::SubsampleHigh => {
            let m = (140.0 * nf * ln_n / lf).ceil() as u64;
            let z = if regime == Regime::SubsampleLow {
                2500.0 * nf * nf / (lf * lf * lf)
            } else {
                5.0 * nf / lf
            };
            (Some(m), Some(98.0 * ln_n), Some(z))
        }
    };
    Ok(RandomizedParams { regime, x, m, y, z })
}

/// Randomized rich lines.
pub fn rich_lines_rand(s: &PointSet, lambda: usize, rng: &mut SeededRng) -> Result<RichLineReport> {
    let params = compute_params(s.len(), lambda)?;
    Ok(rand_points(s.as_slice(), lambda, &params, rng))
}

/// Runs the randomized algorithm with explicit parameters instead of the
/// ones [`compute_params`] would pick. Soundness does not depend on the
/// parameters; completeness guarantees do. A sub-sample size larger than the
/// input is clamped to the input size.
pub fn rich_lines_rand_with_params(
    s: &PointSet,
    lambda: usize,
    params: &RandomizedParams,
    rng: &mut SeededRng,
) -> Result<RichLineReport> {
    if s.len() < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            actual: s.len(),
        });
    }
    check_lambda(lambda, s.len())?;
    Ok(rand_points(s.as_slice(), lambda, params, rng))
}

/// Memoized failures are capped so huge pair samples stay in bounded memory.
const FAILED_MEMO_CAP: usize = 1 << 22;

/// Exact line counts against one point set. With a memo, repeated runs on
/// the same set (one per threshold level) share work.
pub(crate) struct LineCounter {
    index: PointIndex,
    memo: Option<FxHashMap<CanonicalLine, usize>>,
}

impl LineCounter {
    pub(crate) fn new(pts: &[Point], memoize: bool) -> Self {
        LineCounter {
            index: PointIndex::new(pts),
            memo: memoize.then(FxHashMap::default),
        }
    }

    /// Cheap exact test that rules out most lines that cannot be rich.
    fn may_reach(&self, line: &CanonicalLine, lambda: usize) -> bool {
        self.index.lattice_bound(line) >= lambda as u64
    }

    /// Exact count of `line` when it is at least `lambda`.
    fn rich_count(&mut self, line: CanonicalLine, lambda: usize) -> Option<usize> {
        if !self.may_reach(&line, lambda) {
            return None;
        }
        let index = &self.index;
        let count = match &mut self.memo {
            Some(memo) => *memo.entry(line).or_insert_with(|| index.count(&line)),
            None => index.count(&line),
        };
        (count >= lambda).then_some(count)
    }
}

pub(crate) fn rand_points(
    pts: &[Point],
    lambda: usize,
    params: &RandomizedParams,
    rng: &mut SeededRng,
) -> RichLineReport {
    if params.regime == Regime::DeterministicSmall {
        return det_points(pts, lambda);
    }
    rand_points_counted(pts, lambda, params, rng, &mut LineCounter::new(pts, false))
}

/// `counter` must have been built from `pts`.
pub(crate) fn rand_points_counted(
    pts: &[Point],
    lambda: usize,
    params: &RandomizedParams,
    rng: &mut SeededRng,
    counter: &mut LineCounter,
) -> RichLineReport {
    let n = pts.len();
    if params.regime == Regime::DeterministicSmall {
        return det_points(pts, lambda);
    }
    let mut pair_rng = rng.fork(1);
    let mut sampled_lines = (0..params.x).map(move |_| {
        let (i, j) = sample_pair_indices(n, &mut pair_rng);
        line_through_distinct(pts[i], pts[j])
    });

    if params.regime == Regime::DirectFilter {
        // Distinct sampled lines that are lambda-rich for the whole input.
        let mut seen = FxHashSet::default();
        let mut found = Vec::new();
        for line in sampled_lines {
            if counter.may_reach(&line, lambda) && seen.insert(line) {
                if let Some(count) = counter.rich_count(line, lambda) {
                    found.push(IncidenceCount { line, count });
                }
            }
        }
        return RichLineReport::from_lines(found, lambda, n);
    }

    let m = (params.m.expect("sub-sampling regime sets m") as usize).min(n);
    let y = params.y.expect("sub-sampling regime sets y");
    let z = params.z.expect("sub-sampling regime sets z");
    let sample: Vec<Point> = sample_indices(n, m, &mut rng.fork(2))
        .into_iter()
        .map(|i| pts[i])
        .collect();
    let sample_index = PointIndex::new(&sample);

    // Distinct sampled lines with at least y sub-sample points.
    let mut survivors: FxHashSet<CanonicalLine> = FxHashSet::default();
    let mut rejected: FxHashSet<CanonicalLine> = FxHashSet::default();
    for line in &mut sampled_lines {
        if survivors.contains(&line) || rejected.contains(&line) {
            continue;
        }
        let rich_in_sample = sample_index.lattice_bound(&line) as f64 >= y && sample_index.count(&line) as f64 >= y;
        if rich_in_sample {
            survivors.insert(line);
            if survivors.len() as f64 > z {
                return RichLineReport {
                    lines: Vec::new(),
                    lambda,
                    n,
                    aborted: true,
                };
            }
        } else if rejected.len() < FAILED_MEMO_CAP {
            rejected.insert(line);
        }
    }

    let found = survivors
        .into_iter()
        .filter_map(|line| counter.rich_count(line, lambda).map(|count| IncidenceCount { line, count }))
        .collect();
    RichLineReport::from_lines(found, lambda, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(x, y).unwrap()
    }

    fn grid(w: i64, h: i64) -> PointSet {
        PointSet::new((0..h).flat_map(|y| (0..w).map(move |x| pt(x, y))).collect()).unwrap()
    }

    fn collinear(n: i64) -> PointSet {
        PointSet::new((0..n).map(|i| pt(3 * i - 7, 2 * i + 1)).collect()).unwrap()
    }

    #[test]
    fn brute_grid() {
        let r = rich_lines_brute(&grid(3, 3), 3).unwrap();
        assert_eq!(r.len(), 8);
        assert!(r.lines.iter().all(|ic| ic.count == 3));
    }

    #[test]
    fn brute_triangle_and_too_large_lambda() {
        let s = PointSet::new(vec![pt(0, 0), pt(1, 0), pt(0, 1)]).unwrap();
        let r = rich_lines_brute(&s, 2).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.lines.iter().all(|ic| ic.count == 2));
        assert!(rich_lines_brute(&grid(3, 3), 10).unwrap().is_empty());
    }

    #[test]
    fn det_matches_brute_on_examples() {
        let tri = PointSet::new(vec![pt(0, 0), pt(1, 0), pt(0, 1)]).unwrap();
        for (s, l) in [(grid(3, 3), 3), (tri, 2), (grid(3, 3), 10), (grid(7, 5), 5), (grid(9, 9), 7)] {
            assert_eq!(rich_lines_det(&s, l).unwrap(), rich_lines_brute(&s, l).unwrap());
        }
    }

    #[test]
    fn det_collinear() {
        let r = rich_lines_det(&collinear(10), 10).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.lines[0].count, 10);
        assert!(rich_lines_det(&collinear(10), 11).unwrap().is_empty());
    }

    #[test]
    fn lambda_below_two_is_rejected() {
        assert!(rich_lines_brute(&grid(2, 2), 1).is_err());
        assert!(rich_lines_det(&grid(2, 2), 0).is_err());
    }

    #[test]
    fn params_examples() {
        assert_eq!(compute_params(1000, 5).unwrap().regime, Regime::DeterministicSmall);

        let p = compute_params(100, 50).unwrap();
        assert_eq!(p.regime, Regime::DirectFilter);
        assert_eq!(p.x, 185);
        assert_eq!(p.m, None);

        let p = compute_params(10_000, 600).unwrap();
        // 600 > 140 ln^{3/2}(10^4) is false, so this lands in the direct filter.
        assert_eq!(p.regime, Regime::DirectFilter);
        let p = compute_params(10_000, 4000).unwrap();
        assert_eq!(p.regime, Regime::SubsampleHigh);
        assert!((p.z.unwrap() - 12.5).abs() < 1e-12);
        assert!((p.y.unwrap() - 98.0 * (10_000f64).ln()).abs() < 1e-9);
        assert_eq!(p.m, Some((140.0 * 10_000.0 * (10_000f64).ln() / 4000.0).ceil() as u64));
    }

    #[test]
    fn params_errors() {
        assert!(compute_params(2, 2).is_err());
        assert!(compute_params(10, 1).is_err());
        assert!(compute_params(10, 11).is_err());
    }

    #[test]
    fn rand_on_collinear_points() {
        let s = collinear(40);
        let r = rich_lines_rand(&s, 40, &mut SeededRng::new(1)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.lines[0].count, 40);
        assert!(!r.aborted);
    }

    #[test]
    fn rand_grid_matches_brute_almost_always() {
        let s = grid(3, 3);
        let truth = rich_lines_brute(&s, 3).unwrap();
        assert_eq!(compute_params(9, 3).unwrap().regime, Regime::DirectFilter);
        let hits = (0..100)
            .filter(|&seed| rich_lines_rand(&s, 3, &mut SeededRng::new(seed)).unwrap() == truth)
            .count();
        assert!(hits >= 99, "{hits}/100");
    }

    #[test]
    fn forced_subsample_path_is_sound() {
        // A 60-point line plus a 6x6 grid nearby; force the sub-sampling branch.
        let mut v: Vec<Point> = (0..60).map(|i| pt(i, 100 + i)).collect();
        v.extend((0..36).map(|i| pt(200 + i % 6, i / 6)));
        let s = PointSet::new(v).unwrap();
        for (regime, z) in [(Regime::SubsampleLow, 3.0), (Regime::SubsampleHigh, 0.5)] {
            let params = RandomizedParams {
                regime,
                x: 4000,
                m: Some(48),
                y: Some(10.0),
                z: Some(z),
            };
            let r = rich_lines_rand_with_params(&s, 30, &params, &mut SeededRng::new(4)).unwrap();
            if z >= 1.0 {
                assert!(!r.aborted);
                assert_eq!(r.canonical_lines(), rich_lines_brute(&s, 30).unwrap().canonical_lines());
            } else {
                assert!(r.aborted && r.is_empty());
            }
        }
    }
}
