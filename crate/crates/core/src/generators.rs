//! Reproducible instance generators. Every generator that claims a ground
//! truth builds it by construction; tests re-check it with exact predicates.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::geom::{line_through_distinct, primitive_direction, CanonicalLine, Point, PointSet, COORD_LIMIT};
use crate::sampling::{shuffle, SeededRng};

/// Draws allowed per generated point before giving up.
pub const RETRY_BUDGET: usize = 1000;

/// Above this many filler points, [`gen_planted_rich`] stops enforcing exact
/// general position among fillers (the check needs one hash entry per pair).
pub const EXACT_FILLER_LIMIT: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundTruth {
    Yes(Vec<CanonicalLine>),
    No(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    pub points: PointSet,
    pub k: usize,
    pub ground_truth: Option<GroundTruth>,
}

fn check_bound(coord_bound: i64) -> Result<()> {
    if !(1..COORD_LIMIT).contains(&coord_bound) {
        return Err(Error::InvalidGeneratorArgs(format!(
            "coordinate bound {coord_bound} must be in [1, 2^31)"
        )));
    }
    Ok(())
}

/// `{0..cols-1} x {0..rows-1}`, row by row.
pub fn gen_grid(rows: usize, cols: usize) -> Result<PointSet> {
    if rows == 0 || cols == 0 || rows as u128 >= COORD_LIMIT as u128 || cols as u128 >= COORD_LIMIT as u128 {
        return Err(Error::InvalidGeneratorArgs(format!("grid {rows}x{cols}")));
    }
    let mut points = Vec::with_capacity(rows * cols);
    for y in 0..rows as i64 {
        for x in 0..cols as i64 {
            points.push(Point::new(x, y)?);
        }
    }
    Ok(PointSet::from_distinct(points))
}

/// A random line through the box `[-bound, bound]^2` with a short primitive
/// direction, parametrized as `base + t * dir` for `t` in `[t_lo, t_hi]`.
struct PlantedLine {
    line: CanonicalLine,
    base: (i64, i64),
    dir: (i64, i64),
    t_lo: i64,
    t_hi: i64,
}

impl PlantedLine {
    fn point(&self, t: i64) -> Point {
        Point::new(self.base.0 + t * self.dir.0, self.base.1 + t * self.dir.1).expect("t stays inside the box")
    }
}

fn draw_line(bound: i64, min_points: usize, rng: &mut SeededRng) -> Option<PlantedLine> {
    let max_step = (bound / min_points as i64).clamp(1, 8);
    let (dx, dy) = loop {
        let dx = rng.range_inclusive(-max_step, max_step);
        let dy = rng.range_inclusive(-max_step, max_step);
        if (dx, dy) != (0, 0) {
            break primitive_direction(dx, dy);
        }
    };
    let base = (rng.range_inclusive(-bound, bound), rng.range_inclusive(-bound, bound));
    let (mut t_lo, mut t_hi) = (i64::MIN, i64::MAX);
    for (origin, step) in [(base.0, dx), (base.1, dy)] {
        if step == 0 {
            continue;
        }
        let (a, b) = ((-bound - origin) as f64 / step as f64, (bound - origin) as f64 / step as f64);
        t_lo = t_lo.max(a.min(b).ceil() as i64);
        t_hi = t_hi.min(a.max(b).floor() as i64);
    }
    if t_hi < t_lo || ((t_hi - t_lo + 1) as usize) < min_points {
        return None;
    }
    let other = Point::new(base.0 + dx, base.1 + dy).ok()?;
    let line = line_through_distinct(Point::new(base.0, base.1).ok()?, other);
    Some(PlantedLine {
        line,
        base,
        dir: (dx, dy),
        t_lo,
        t_hi,
    })
}

/// Places `sizes[i]` new points on the `i`-th of `sizes.len()` distinct random
/// lines. Points are emitted round-robin across lines.
pub fn gen_planted_cover_sizes(sizes: &[usize], coord_bound: i64, rng: &mut SeededRng) -> Result<CoverInstance> {
    check_bound(coord_bound)?;
    if sizes.is_empty() {
        return Err(Error::InvalidGeneratorArgs("at least one line is required".into()));
    }
    let need = sizes.iter().copied().max().unwrap_or(0).max(2);
    let mut lines: Vec<PlantedLine> = Vec::with_capacity(sizes.len());
    let mut attempts = 0;
    while lines.len() < sizes.len() {
        attempts += 1;
        if attempts > RETRY_BUDGET * sizes.len() {
            return Err(Error::GeneratorExhausted {
                what: "distinct planted lines",
                attempts,
            });
        }
        if let Some(cand) = draw_line(coord_bound, need, rng) {
            if lines.iter().all(|l| l.line != cand.line) {
                lines.push(cand);
            }
        }
    }

    let mut seen: FxHashSet<Point> = FxHashSet::default();
    let mut per_line: Vec<Vec<Point>> = Vec::with_capacity(lines.len());
    for (line, &size) in lines.iter().zip(sizes) {
        let mut pts = Vec::with_capacity(size);
        let mut misses = 0;
        while pts.len() < size {
            let p = line.point(rng.range_inclusive(line.t_lo, line.t_hi));
            if seen.insert(p) {
                pts.push(p);
            } else {
                misses += 1;
                if misses > RETRY_BUDGET * size.max(1) {
                    return Err(Error::GeneratorExhausted {
                        what: "distinct points on a planted line",
                        attempts: misses,
                    });
                }
            }
        }
        per_line.push(pts);
    }

    let total: usize = sizes.iter().sum();
    let mut points = Vec::with_capacity(total);
    for round in 0..need {
        for pts in &per_line {
            if let Some(&p) = pts.get(round) {
                points.push(p);
            }
        }
    }
    let witness: Vec<CanonicalLine> = lines.iter().map(|l| l.line).collect();
    Ok(CoverInstance {
        points: PointSet::from_distinct(points),
        k: witness.len(),
        ground_truth: Some(GroundTruth::Yes(witness)),
    })
}

/// `k` distinct random lines with `per_line` points each.
pub fn gen_planted_cover(k: usize, per_line: usize, coord_bound: i64, rng: &mut SeededRng) -> Result<CoverInstance> {
    if k == 0 || per_line < 2 {
        return Err(Error::InvalidGeneratorArgs(format!(
            "planted cover needs k >= 1 and per_line >= 2 (got k = {k}, per_line = {per_line})"
        )));
    }
    gen_planted_cover_sizes(&vec![per_line; k], coord_bound, rng)
}

/// Ground truth for points in general position and budget `k`.
pub fn general_position_truth(points: &PointSet, k: usize) -> GroundTruth {
    let n = points.len();
    if 2 * k < n {
        GroundTruth::No(format!("no three points are collinear, so {k} lines cover at most {} < {n} points", 2 * k))
    } else {
        GroundTruth::Yes(pair_cover(points))
    }
}

/// Pairs consecutive points into lines: a cover with `ceil(n / 2)` lines.
pub fn pair_cover(points: &PointSet) -> Vec<CanonicalLine> {
    let pts = points.as_slice();
    let mut lines: Vec<CanonicalLine> = pts
        .chunks(2)
        .map(|c| match c {
            [p, q] => line_through_distinct(*p, *q),
            [p] => CanonicalLine::from_coefficients(0, 1, -(p.y() as i128)).expect("b = 1"),
            _ => unreachable!(),
        })
        .collect();
    lines.sort_unstable();
    lines.dedup();
    lines
}

/// Incrementally tracks every line spanned by two accepted points.
struct GeneralPosition {
    points: Vec<Point>,
    seen: FxHashSet<Point>,
    spanned: FxHashSet<CanonicalLine>,
}

impl GeneralPosition {
    fn new() -> Self {
        GeneralPosition {
            points: Vec::new(),
            seen: FxHashSet::default(),
            spanned: FxHashSet::default(),
        }
    }

    fn accepts(&self, p: Point) -> bool {
        !self.seen.contains(&p) && self.points.iter().all(|&q| !self.spanned.contains(&line_through_distinct(p, q)))
    }

    fn push(&mut self, p: Point) {
        for &q in &self.points {
            self.spanned.insert(line_through_distinct(p, q));
        }
        self.points.push(p);
        self.seen.insert(p);
    }
}

/// `n` points, no three collinear, by rejection sampling in the box.
/// The instance carries `k = ceil(n/2) - 1`, the largest budget that fails.
pub fn gen_general_position(n: usize, coord_bound: i64, rng: &mut SeededRng) -> Result<CoverInstance> {
    check_bound(coord_bound)?;
    if n == 0 {
        return Err(Error::InvalidGeneratorArgs("n must be at least 1".into()));
    }
    let mut gp = GeneralPosition::new();
    while gp.points.len() < n {
        let p = draw_accepted(coord_bound, rng, |p| gp.accepts(p), "point in general position")?;
        gp.push(p);
    }
    let points = PointSet::from_distinct(gp.points);
    let k = n.div_ceil(2) - 1;
    let ground_truth = if k == 0 {
        None
    } else {
        Some(general_position_truth(&points, k))
    };
    Ok(CoverInstance { points, k, ground_truth })
}

fn draw_accepted(bound: i64, rng: &mut SeededRng, accept: impl Fn(Point) -> bool, what: &'static str) -> Result<Point> {
    for _ in 0..RETRY_BUDGET {
        let p = Point::new(rng.range_inclusive(-bound, bound), rng.range_inclusive(-bound, bound))?;
        if accept(p) {
            return Ok(p);
        }
    }
    Err(Error::GeneratorExhausted {
        what,
        attempts: RETRY_BUDGET,
    })
}

/// One line with exactly `lambda` points plus `n - lambda` fillers off that
/// line, shuffled together. Up to [`EXACT_FILLER_LIMIT`] fillers are kept in
/// general position, so for `lambda >= 4` the planted line is the only
/// `lambda`-rich line. Beyond that limit fillers are only kept off the planted
/// line and distinct.
pub fn gen_planted_rich(n: usize, lambda: usize, coord_bound: i64, rng: &mut SeededRng) -> Result<PointSet> {
    check_bound(coord_bound)?;
    if lambda < 2 || lambda > n {
        return Err(Error::InvalidGeneratorArgs(format!("need 2 <= lambda <= n (got lambda = {lambda}, n = {n})")));
    }
    let planted = (0..RETRY_BUDGET)
        .find_map(|_| draw_line(coord_bound, lambda, rng))
        .ok_or(Error::GeneratorExhausted {
            what: "planted line",
            attempts: RETRY_BUDGET,
        })?;
    let mut on_line: FxHashSet<Point> = FxHashSet::default();
    while on_line.len() < lambda {
        on_line.insert(planted.point(rng.range_inclusive(planted.t_lo, planted.t_hi)));
    }
    let mut points: Vec<Point> = on_line.iter().copied().collect();
    points.sort_unstable();

    let fillers = n - lambda;
    if fillers <= EXACT_FILLER_LIMIT {
        let mut gp = GeneralPosition::new();
        while gp.points.len() < fillers {
            let p = draw_accepted(
                coord_bound,
                rng,
                |p| !planted.line.contains(p) && gp.accepts(p),
                "filler point in general position",
            )?;
            gp.push(p);
        }
        points.extend(gp.points);
    } else {
        let mut seen = on_line;
        for _ in 0..fillers {
            let p = draw_accepted(
                coord_bound,
                rng,
                |p| !planted.line.contains(p) && !seen.contains(&p),
                "distinct filler point",
            )?;
            seen.insert(p);
            points.push(p);
        }
    }
    shuffle(&mut points, rng);
    Ok(PointSet::from_distinct(points))
}

/// A mixed corpus of `count` small point sets with `3 <= n <= max_n`,
/// cycling through grids, planted covers with noise, dense random boxes,
/// planted rich lines and general position.
pub fn fuzz_corpus(count: usize, max_n: usize, seed: u64) -> Result<Vec<PointSet>> {
    if max_n < 3 {
        return Err(Error::InvalidGeneratorArgs(format!("max_n = {max_n} is below 3")));
    }
    let root = SeededRng::new(seed);
    (0..count)
        .map(|i| {
            let mut rng = root.fork(i as u64);
            let n = 3 + rng.below(max_n - 2);
            match i % 5 {
                0 => {
                    let cols = 1 + rng.below(n);
                    let rows = n / cols;
                    if rows * cols < 3 {
                        gen_grid(1, n)
                    } else {
                        gen_grid(rows, cols)
                    }
                }
                1 => {
                    let lines = 1 + rng.below(6);
                    let sizes: Vec<usize> = (0..lines).map(|_| 2 + rng.below((n / lines).max(1))).collect();
                    let bound = (n as i64).max(30);
                    let mut points = gen_planted_cover_sizes(&sizes, bound, &mut rng)?.points.into_vec();
                    let mut seen: FxHashSet<Point> = points.iter().copied().collect();
                    for _ in 0..rng.below(8) {
                        let p = Point::new(rng.range_inclusive(-bound, bound), rng.range_inclusive(-bound, bound))?;
                        if seen.insert(p) {
                            points.push(p);
                        }
                    }
                    Ok(PointSet::from_distinct(points))
                }
                2 => {
                    let half = ((n as f64).sqrt() / 2.0).ceil() as i64 + 1;
                    let mut seen = FxHashSet::default();
                    let mut points = Vec::with_capacity(n);
                    while points.len() < n.min(((2 * half + 1) * (2 * half + 1)) as usize) {
                        let p = Point::new(rng.range_inclusive(-half, half), rng.range_inclusive(-half, half))?;
                        if seen.insert(p) {
                            points.push(p);
                        }
                    }
                    Ok(PointSet::from_distinct(points))
                }
                3 => {
                    let lambda = 2 + rng.below(n - 1);
                    gen_planted_rich(n, lambda, 10_000, &mut rng)
                }
                _ => gen_general_position(n, 100_000, &mut rng).map(|inst| inst.points),
            }
        })
        .collect()
}
