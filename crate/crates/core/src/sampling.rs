//! Seeded randomness and the two sampling primitives used by the randomized
//! algorithms.
//!
//! The generator is ChaCha8 seeded from a `u64`, so a given seed yields the
//! same draw sequence on every platform. Sub-computations take child
//! generators from [`SeededRng::fork`], which derives the child seed from the
//! parent seed and a caller-chosen tag without consuming parent state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Point, PointSet};

/// Seed used by the command line when `--seed` is omitted.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child generator for the sub-computation identified by `tag`.
    pub fn fork(&self, tag: u64) -> SeededRng {
        SeededRng::new(splitmix64(self.seed ^ splitmix64(tag.wrapping_add(0x5851_f42d_4c95_7f2d))))
    }

    /// Uniform integer in `[0, bound)`.
    pub fn below(&mut self, bound: usize) -> usize {
        self.inner.gen_range(0..bound)
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        self.inner.gen_range(lo..=hi)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.gen()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Draws `x` pairs, each a uniformly random 2-subset of `s`. Draws are
/// independent, so the same pair may come up more than once.
pub fn sample_pairs(s: &PointSet, x: usize, rng: &mut SeededRng) -> Result<Vec<(Point, Point)>> {
    if s.len() < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            actual: s.len(),
        });
    }
    if x == 0 {
        return Err(Error::InvalidSampleSize(x));
    }
    let pts = s.as_slice();
    Ok((0..x)
        .map(|_| {
            let (i, j) = sample_pair_indices(pts.len(), rng);
            (pts[i], pts[j])
        })
        .collect())
}

/// Two distinct indices in `[0, n)`, `i < j`, uniform over all 2-subsets.
#[inline]
pub(crate) fn sample_pair_indices(n: usize, rng: &mut SeededRng) -> (usize, usize) {
    debug_assert!(n >= 2);
    let i = rng.below(n);
    let mut j = rng.below(n);
    while j == i {
        j = rng.below(n);
    }
    (i.min(j), i.max(j))
}

/// Uniform `m`-subset of `s`, returned in the relative order of `s`.
pub fn sample_without_replacement(s: &PointSet, m: usize, rng: &mut SeededRng) -> Result<PointSet> {
    if m == 0 {
        return Err(Error::InvalidSampleSize(m));
    }
    if m > s.len() {
        return Err(Error::SampleTooLarge {
            requested: m,
            available: s.len(),
        });
    }
    let mut chosen = sample_indices(s.len(), m, rng);
    chosen.sort_unstable();
    let pts = s.as_slice();
    Ok(PointSet::from_distinct(chosen.into_iter().map(|i| pts[i]).collect()))
}

/// First `m` slots of a partial Fisher-Yates shuffle of `0..n`.
pub(crate) fn sample_indices(n: usize, m: usize, rng: &mut SeededRng) -> Vec<usize> {
    debug_assert!(m <= n);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = i + rng.below(n - i);
        idx.swap(i, j);
    }
    idx.truncate(m);
    idx
}

/// In-place uniform shuffle.
pub(crate) fn shuffle<T>(items: &mut [T], rng: &mut SeededRng) {
    for i in (1..items.len()).rev() {
        let j = rng.below(i + 1);
        items.swap(i, j);
    }
}
