//! Exact integer points, canonical lines and incidence counting.
//!
//! Coordinates are bounded by `|v| < 2^31`. With that bound the coefficients
//! of a line through two input points satisfy `|a|, |b| <= 2^32` and
//! `|c| <= 2^64`, and every membership test `a*x + b*y + c` fits in `i128`.
//! No predicate in this crate ever touches floating point.

use std::fmt;

use num_integer::Integer;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};

/// Exclusive bound on the magnitude of a coordinate.
pub const COORD_LIMIT: i64 = 1 << 31;

/// A point with exact integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    x: i64,
    y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Result<Self> {
        check_coord(x as i128)?;
        check_coord(y as i128)?;
        Ok(Point { x, y })
    }

    #[inline]
    pub fn x(&self) -> i64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> i64 {
        self.y
    }
}

pub(crate) fn check_coord(value: i128) -> Result<()> {
    if value.unsigned_abs() >= COORD_LIMIT as u128 {
        return Err(Error::CoordinateOutOfRange { value });
    }
    Ok(())
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The line `a*x + b*y + c = 0` in its unique normalized form:
/// `gcd(|a|, |b|, |c|) = 1` and either `a > 0` or `a = 0, b > 0`.
///
/// The derived ordering is lexicographic on `(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalLine {
    a: i64,
    b: i64,
    c: i128,
}

impl CanonicalLine {
    /// Normalizes arbitrary coefficients into canonical form.
    pub fn from_coefficients(a: i64, b: i64, c: i128) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::DegenerateLine);
        }
        let g = (a.unsigned_abs() as u128).gcd(&(b.unsigned_abs() as u128));
        let g = g.gcd(&c.unsigned_abs()) as i128;
        let (mut a, mut b, mut c) = (a as i128 / g, b as i128 / g, c / g);
        if a < 0 || (a == 0 && b < 0) {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(CanonicalLine {
            a: a as i64,
            b: b as i64,
            c,
        })
    }

    /// Accepts coefficients only if they are already canonical.
    pub fn new(a: i64, b: i64, c: i128) -> Result<Self> {
        let line = Self::from_coefficients(a, b, c)?;
        if (line.a, line.b, line.c) != (a, b, c) {
            return Err(Error::NonCanonicalLine { a, b, c });
        }
        Ok(line)
    }

    #[inline]
    pub fn a(&self) -> i64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> i64 {
        self.b
    }

    #[inline]
    pub fn c(&self) -> i128 {
        self.c
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        contains(self, p)
    }
}

impl fmt::Display for CanonicalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.b, self.c)
    }
}

/// The canonical line through two distinct points.
pub fn line_through(p: Point, q: Point) -> Result<CanonicalLine> {
    if p == q {
        return Err(Error::IdenticalPoints(p));
    }
    Ok(line_through_distinct(p, q))
}

#[inline]
pub(crate) fn line_through_distinct(p: Point, q: Point) -> CanonicalLine {
    debug_assert_ne!(p, q);
    let (dx, dy) = primitive_direction(q.x - p.x, q.y - p.y);
    // Normal vector (dy, -dx) is primitive, so c is an integer and the triple
    // is already reduced; only the sign needs fixing.
    let (a, b) = (dy, -dx);
    let c = -((a as i128) * (p.x as i128) + (b as i128) * (p.y as i128));
    if a < 0 || (a == 0 && b < 0) {
        CanonicalLine {
            a: -a,
            b: -b,
            c: -c,
        }
    } else {
        CanonicalLine { a, b, c }
    }
}

/// Reduces `(dx, dy) != (0, 0)` to the primitive direction with `dx > 0`,
/// or `dx = 0, dy > 0`. Two displacement vectors are parallel iff their
/// primitive directions agree.
#[inline]
pub(crate) fn primitive_direction(dx: i64, dy: i64) -> (i64, i64) {
    let g = dx.unsigned_abs().gcd(&dy.unsigned_abs()) as i64;
    let (dx, dy) = (dx / g, dy / g);
    if dx < 0 || (dx == 0 && dy < 0) {
        (-dx, -dy)
    } else {
        (dx, dy)
    }
}

/// Exact membership test.
#[inline]
pub fn contains(l: &CanonicalLine, p: Point) -> bool {
    (l.a as i128) * (p.x as i128) + (l.b as i128) * (p.y as i128) + l.c == 0
}

/// An ordered set of pairwise distinct points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Builds a point set, rejecting duplicates. Order is preserved.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let mut seen = FxHashSet::default();
        seen.reserve(points.len());
        for (index, &point) in points.iter().enumerate() {
            if !seen.insert(point) {
                return Err(Error::DuplicatePoint { point, index });
            }
        }
        Ok(PointSet { points })
    }

    /// Caller guarantees the points are pairwise distinct.
    pub(crate) fn from_distinct(points: Vec<Point>) -> Self {
        debug_assert_eq!(
            points.iter().collect::<FxHashSet<_>>().len(),
            points.len(),
            "duplicate points"
        );
        PointSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, index: usize) -> Option<Point> {
        self.points.get(index).copied()
    }

    pub fn into_vec(self) -> Vec<Point> {
        self.points
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Number of points of a set lying on a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IncidenceCount {
    pub line: CanonicalLine,
    pub count: usize,
}

/// Exact per-line incidence counts, in the order of `lines`.
///
/// This is a plain `O(|lines| * |S|)` membership scan.
pub fn incidences(lines: &[CanonicalLine], s: &PointSet) -> Vec<IncidenceCount> {
    lines
        .iter()
        .map(|line| IncidenceCount {
            line: *line,
            count: s.iter().filter(|p| contains(line, **p)).count(),
        })
        .collect()
}

/// Splits `s` into the points covered by some line of `lines` and the rest.
/// Both halves keep the relative order of `s`.
pub fn covered_subset(lines: &[CanonicalLine], s: &PointSet) -> (PointSet, PointSet) {
    let (covered, uncovered) = partition_covered(lines, s.as_slice());
    (
        PointSet::from_distinct(covered),
        PointSet::from_distinct(uncovered),
    )
}

pub(crate) fn partition_covered(lines: &[CanonicalLine], points: &[Point]) -> (Vec<Point>, Vec<Point>) {
    points
        .iter()
        .partition(|p| lines.iter().any(|l| contains(l, **p)))
}

#[inline]
pub(crate) fn is_covered(lines: &[CanonicalLine], p: Point) -> bool {
    lines.iter().any(|l| contains(l, p))
}

/// Hash index over a point set that counts the points on a line exactly.
///
/// When a line crosses the bounding box of the set in few lattice points, the
/// count walks those lattice points and probes the hash set; otherwise it falls
/// back to a linear scan. Both paths are exact.
#[derive(Debug, Clone)]
pub struct PointIndex {
    points: Vec<Point>,
    set: FxHashSet<Point>,
    min_x: i64,
    max_x: i64,
    min_y: i64,
    max_y: i64,
}

impl PointIndex {
    pub fn new(points: &[Point]) -> Self {
        let mut set = FxHashSet::default();
        set.reserve(points.len());
        set.extend(points.iter().copied());
        let (mut min_x, mut max_x, mut min_y, mut max_y) = (0, -1, 0, -1);
        if let Some(first) = points.first() {
            (min_x, max_x, min_y, max_y) = (first.x, first.x, first.y, first.y);
            for p in points {
                min_x = min_x.min(p.x);
                max_x = max_x.max(p.x);
                min_y = min_y.min(p.y);
                max_y = max_y.max(p.y);
            }
        }
        PointIndex {
            points: points.to_vec(),
            set,
            min_x,
            max_x,
            min_y,
            max_y,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_point(&self, p: Point) -> bool {
        self.set.contains(&p)
    }

    /// Upper bound on the indexed points of `line` from the bounding box
    /// alone. Integer points of a line with `gcd(a, b) = 1` are `|b|` apart in
    /// x and `|a|` apart in y; if the gcd is larger there are none.
    pub fn lattice_bound(&self, line: &CanonicalLine) -> u64 {
        if self.points.is_empty() {
            return 0;
        }
        let span_x = self.max_x.abs_diff(self.min_x);
        let span_y = self.max_y.abs_diff(self.min_y);
        let along = |span: u64, step: i64| if step == 0 { u64::MAX } else { span / step.unsigned_abs() + 1 };
        along(span_x, line.b).min(along(span_y, line.a))
    }

    /// Exact number of indexed points on `line`.
    pub fn count(&self, line: &CanonicalLine) -> usize {
        if self.points.is_empty() {
            return 0;
        }
        match self.lattice_range(line) {
            None => 0,
            Some(walk) => {
                let steps = walk.t_hi - walk.t_lo + 1;
                if steps <= 0 {
                    0
                } else if (steps as u128) * 4 <= self.points.len() as u128 {
                    (walk.t_lo..=walk.t_hi)
                        .filter(|&t| {
                            let x = walk.x0 + t * walk.step_x;
                            let y = walk.y0 + t * walk.step_y;
                            // Inside the bounding box, so both fit in i64.
                            self.set.contains(&Point {
                                x: x as i64,
                                y: y as i64,
                            })
                        })
                        .count()
                } else {
                    self.scan(line)
                }
            }
        }
    }

    fn scan(&self, line: &CanonicalLine) -> usize {
        self.points.iter().filter(|p| contains(line, **p)).count()
    }

    /// Parametrizes the integer points of `line` inside the bounding box as
    /// `(x0 + t*step_x, y0 + t*step_y)` for `t` in `[t_lo, t_hi]`. Returns
    /// `None` when the line has no integer points at all.
    fn lattice_range(&self, line: &CanonicalLine) -> Option<LatticeWalk> {
        let (a, b, c) = (line.a as i128, line.b as i128, line.c);
        let (min_x, max_x) = (self.min_x as i128, self.max_x as i128);
        let (min_y, max_y) = (self.min_y as i128, self.max_y as i128);
        if b == 0 {
            // a*x + c = 0 with gcd(a, c) = 1: integer points need a = 1.
            if a != 1 {
                return None;
            }
            return Some(LatticeWalk {
                x0: -c,
                y0: 0,
                step_x: 0,
                step_y: 1,
                t_lo: if (min_x..=max_x).contains(&-c) { min_y } else { 1 },
                t_hi: if (min_x..=max_x).contains(&-c) { max_y } else { 0 },
            });
        }
        if a == 0 {
            if b != 1 {
                return None;
            }
            return Some(LatticeWalk {
                x0: 0,
                y0: -c,
                step_x: 1,
                step_y: 0,
                t_lo: if (min_y..=max_y).contains(&-c) { min_x } else { 1 },
                t_hi: if (min_y..=max_y).contains(&-c) { max_x } else { 0 },
            });
        }
        let eg = a.extended_gcd(&b);
        if eg.gcd.abs() != 1 {
            // gcd(a, b) > 1 and gcd(a, b, c) = 1, so a*x + b*y = -c is unsolvable.
            return None;
        }
        let (x0, y0) = (-c * eg.x * eg.gcd, -c * eg.y * eg.gcd);
        let (step_x, step_y) = (b, -a);
        let (lo_x, hi_x) = param_interval(x0, step_x, min_x, max_x);
        let (lo_y, hi_y) = param_interval(y0, step_y, min_y, max_y);
        Some(LatticeWalk {
            x0,
            y0,
            step_x,
            step_y,
            t_lo: lo_x.max(lo_y),
            t_hi: hi_x.min(hi_y),
        })
    }
}

struct LatticeWalk {
    x0: i128,
    y0: i128,
    step_x: i128,
    step_y: i128,
    t_lo: i128,
    t_hi: i128,
}

/// Integer `t` with `lo <= origin + t*step <= hi`, for `step != 0`.
fn param_interval(origin: i128, step: i128, lo: i128, hi: i128) -> (i128, i128) {
    let (lo_num, hi_num) = (lo - origin, hi - origin);
    if step > 0 {
        (ceil_div(lo_num, step), Integer::div_floor(&hi_num, &step))
    } else {
        (ceil_div(hi_num, step), Integer::div_floor(&lo_num, &step))
    }
}

fn ceil_div(num: i128, den: i128) -> i128 {
    -Integer::div_floor(&-num, &den)
}
