//! Exact Line Cover decision for small instances by bounded branching.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::geom::{line_through_distinct, CanonicalLine, Point, PointSet};

pub const SOLVER_MAX_POINTS: usize = 60;
pub const SOLVER_MAX_K: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverAnswer {
    /// At most `k` lines covering every point.
    Yes(Vec<CanonicalLine>),
    No,
}

impl CoverAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, CoverAnswer::Yes(_))
    }
}

/// Decides whether `s` can be covered by at most `k` lines.
pub fn solve_cover(s: &PointSet, k: usize) -> Result<CoverAnswer> {
    if s.len() > SOLVER_MAX_POINTS || k > SOLVER_MAX_K {
        return Err(Error::SolverBounds {
            points: s.len(),
            k,
            max_points: SOLVER_MAX_POINTS,
            max_k: SOLVER_MAX_K,
        });
    }
    Ok(match branch(s.as_slice(), k) {
        Some(lines) => CoverAnswer::Yes(lines),
        None => CoverAnswer::No,
    })
}

fn branch(uncovered: &[Point], k: usize) -> Option<Vec<CanonicalLine>> {
    if uncovered.len() <= k {
        // One horizontal line per point.
        let mut lines: Vec<CanonicalLine> = uncovered
            .iter()
            .map(|p| CanonicalLine::from_coefficients(0, 1, -(p.y() as i128)).expect("b = 1"))
            .collect();
        lines.sort_unstable();
        lines.dedup();
        return Some(lines);
    }
    if k == 0 {
        return None;
    }

    // The first anchor to see a line is its lowest point, so its group
    // holds every other point of the line.
    let mut counts: FxHashMap<CanonicalLine, usize> = FxHashMap::default();
    let mut group: FxHashMap<CanonicalLine, usize> = FxHashMap::default();
    for (i, &p) in uncovered.iter().enumerate() {
        group.clear();
        for &q in &uncovered[i + 1..] {
            *group.entry(line_through_distinct(p, q)).or_default() += 1;
        }
        for (&line, &t) in &group {
            counts.entry(line).or_insert(t + 1);
        }
    }
    let max_count = counts.values().copied().max().unwrap_or(1);
    if uncovered.len() > k * max_count {
        return None;
    }

    // A line with more than k points belongs to every cover of size <= k.
    let candidates: Vec<CanonicalLine> = match counts.iter().filter(|&(_, &c)| c > k).map(|(l, _)| *l).min() {
        Some(line) => vec![line],
        None => {
            let p = uncovered[0];
            let mut through: Vec<(usize, CanonicalLine)> = counts
                .iter()
                .filter(|(l, _)| l.contains(p))
                .map(|(l, &c)| (c, *l))
                .collect();
            through.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            through.into_iter().map(|(_, l)| l).collect()
        }
    };
    for line in candidates {
        let rest: Vec<Point> = uncovered.iter().copied().filter(|q| !line.contains(*q)).collect();
        if let Some(mut lines) = branch(&rest, k - 1) {
            lines.push(line);
            return Some(lines);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::covered_subset;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(x, y).unwrap()
    }

    fn grid3() -> PointSet {
        PointSet::new((0..9).map(|i| pt(i % 3, i / 3)).collect()).unwrap()
    }

    #[test]
    fn grid_three_and_two() {
        let s = grid3();
        match solve_cover(&s, 3).unwrap() {
            CoverAnswer::Yes(lines) => {
                assert!(lines.len() <= 3);
                assert!(covered_subset(&lines, &s).1.is_empty());
            }
            CoverAnswer::No => panic!("grid is coverable by three rows"),
        }
        assert_eq!(solve_cover(&s, 2).unwrap(), CoverAnswer::No);
    }

    #[test]
    fn general_position_seven() {
        let s = PointSet::new(vec![pt(0, 0), pt(1, 3), pt(2, 1), pt(4, 7), pt(5, 2), pt(7, 12), pt(9, 4)]).unwrap();
        assert_eq!(solve_cover(&s, 3).unwrap(), CoverAnswer::No);
        assert!(solve_cover(&s, 4).unwrap().is_yes());
    }

    #[test]
    fn tiny_sets() {
        let s = PointSet::new(vec![pt(3, 4)]).unwrap();
        assert_eq!(solve_cover(&s, 0).unwrap(), CoverAnswer::No);
        assert!(solve_cover(&s, 1).unwrap().is_yes());
    }

    #[test]
    fn bounds_are_enforced() {
        let s = PointSet::new((0..61).map(|i| pt(i, 0)).collect()).unwrap();
        assert!(solve_cover(&s, 1).is_err());
        assert!(solve_cover(&grid3(), 6).is_err());
    }
}
