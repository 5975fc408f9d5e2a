//! Kernelization for Line Cover: shrink `(S, k)` to an equivalent instance
//! with at most `k^2` points by forcing saturated lines.
//!
//! A line is saturated when it holds at least `k + 1` of the points not yet
//! covered by forced lines. Every cover with at most `k` lines must contain
//! it, so forcing it never changes the answer.
//!
//! For `k >= 16` the input is consumed in batches of `2k^2` uncovered points.
//! Each batch goes through [`saturated_lines`], which walks a ladder of
//! richness thresholds (the [`SaturationSchedule`]) from high to low and stops
//! as soon as the lines found either cover a third of `k^2` batch points or
//! are numerous enough for the current level. Smaller `k` uses the simpler
//! procedure in [`kernelize_small`].

use crate::error::{Error, Result};
use crate::geom::{is_covered, partition_covered, CanonicalLine, Point, PointSet};
use crate::rich_lines::{compute_params, Regime, det_points, rand_points, rand_points_counted, LineCounter, RichLineReport};
use crate::sampling::SeededRng;

/// Smallest `k` handled by the batched algorithm; below it `ln ln ln k <= 0`.
pub const MIN_SCHEDULE_K: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Randomized,
    Deterministic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationSchedule {
    pub k: usize,
    pub epsilon: f64,
    /// `y[0..=r]`, an arithmetic progression with step `epsilon`.
    pub y: Vec<f64>,
    pub r: usize,
    pub variant: Variant,
}

pub fn build_schedule(k: usize, variant: Variant) -> Result<SaturationSchedule> {
    if k < MIN_SCHEDULE_K {
        return Err(Error::InvalidK {
            k,
            reason: "the saturation schedule needs k >= 16",
        });
    }
    let ln_k = (k as f64).ln();
    let lnln = ln_k.ln();
    let lnlnln = lnln.ln();
    let epsilon = lnlnln / ln_k;
    let (y0, target) = match variant {
        Variant::Randomized => (1.0 - lnln / ln_k - lnlnln / ln_k, k as f64 / lnln.powi(2)),
        Variant::Deterministic => (2.0 * lnln / ln_k - 1.0, k as f64 / lnln.powi(5)),
    };
    let mut y = vec![y0];
    while (y[y.len() - 1] * ln_k).exp() < target {
        y.push(y0 + y.len() as f64 * epsilon);
    }
    Ok(SaturationSchedule {
        k,
        epsilon,
        r: y.len() - 1,
        y,
        variant,
    })
}

impl SaturationSchedule {
    /// Batch size `2k^2`.
    pub fn sigma(&self) -> usize {
        2 * self.k * self.k
    }

    fn k_pow(&self, e: f64) -> f64 {
        (e * (self.k as f64).ln()).exp()
    }

    /// Richness threshold used at level `i` (`0..=r+1`).
    pub fn threshold(&self, i: usize) -> usize {
        assert!(i <= self.r + 1, "level {i} out of range");
        if i == self.r + 1 {
            return self.k + 1;
        }
        let t = (self.sigma() as f64 * self.k_pow(-(1.0 + self.y[i]) / 2.0)).ceil() as usize;
        debug_assert!(t > self.k);
        t
    }

    /// Points a level-0 result must cover to stop: `k^2 / 3`.
    pub fn coverage_bound(&self) -> f64 {
        (self.k * self.k) as f64 / 3.0
    }

    /// Line count that stops the ladder at level `i`, for `1 <= i <= r + 1`.
    pub fn count_bound(&self, i: usize) -> f64 {
        assert!((1..=self.r + 1).contains(&i), "level {i} has no count bound");
        if i == self.r + 1 {
            self.k_pow((1.0 + self.y[self.r]) / 2.0) / 12.0
        } else {
            self.k_pow((1.0 + self.y[i - 1]) / 2.0) / (12.0 * self.r as f64)
        }
    }

    /// Level whose interval contains `s(s-1) / (sigma(sigma-1))` for a line
    /// with `s > k` batch points. Levels `0..=r` use lower endpoints
    /// `k^{-(1+y_i)}`; everything below `k^{-(1+y_r)}` is level `r + 1`.
    pub fn level_of(&self, s: usize) -> usize {
        let sigma = self.sigma() as f64;
        let rho = (s as f64) * (s as f64 - 1.0) / (sigma * (sigma - 1.0));
        (0..=self.r)
            .find(|&i| rho >= self.k_pow(-(1.0 + self.y[i])))
            .unwrap_or(self.r + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    Coverage,
    LevelCount(usize),
    FinalCount,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturatedLinesResult {
    /// Batch points not covered by `lines`.
    pub remaining: PointSet,
    pub lines: Vec<CanonicalLine>,
    pub stop_reason: StopReason,
}

/// Runs the threshold ladder on one batch of exactly `2k^2` points.
pub fn saturated_lines(
    batch: &PointSet,
    k: usize,
    sched: &SaturationSchedule,
    rng: &mut SeededRng,
) -> Result<SaturatedLinesResult> {
    if sched.k != k {
        return Err(Error::InvalidK {
            k,
            reason: "schedule was built for a different k",
        });
    }
    if batch.len() != sched.sigma() {
        return Err(Error::BatchSize {
            expected: sched.sigma(),
            actual: batch.len(),
        });
    }
    let (remaining, lines, stop_reason) = ladder(batch.as_slice(), sched, rng);
    Ok(SaturatedLinesResult {
        remaining: PointSet::from_distinct(remaining),
        lines,
        stop_reason,
    })
}

fn ladder(batch: &[Point], sched: &SaturationSchedule, rng: &mut SeededRng) -> (Vec<Point>, Vec<CanonicalLine>, StopReason) {
    let r = sched.r;
    // The exact engine is run once at the lowest threshold; every level is a
    // filter of that report.
    let exact = match sched.variant {
        Variant::Deterministic => Some(det_points(batch, sched.k + 1)),
        Variant::Randomized => None,
    };
    let mut counter = LineCounter::new(batch, true);
    for i in 0..=r + 1 {
        let lambda = sched.threshold(i);
        let lines: Vec<CanonicalLine> = match &exact {
            Some(report) => report
                .lines
                .iter()
                .filter(|ic| ic.count >= lambda)
                .map(|ic| ic.line)
                .collect(),
            None => {
                let params = compute_params(batch.len(), lambda).expect("threshold is within [2, sigma]");
                let report = if params.regime == Regime::DeterministicSmall {
                    det_points(batch, lambda)
                } else {
                    rand_points_counted(batch, lambda, &params, &mut rng.fork(i as u64), &mut counter)
                };
                report.canonical_lines()
            }
        };
        if lines.is_empty() {
            continue;
        }
        let stop = if i == 0 {
            let (covered, _) = partition_covered(&lines, batch);
            (covered.len() as f64 >= sched.coverage_bound()).then_some(StopReason::Coverage)
        } else if i <= r {
            (lines.len() as f64 >= sched.count_bound(i)).then_some(StopReason::LevelCount(i))
        } else {
            (lines.len() as f64 >= sched.count_bound(i)).then_some(StopReason::FinalCount)
        };
        if let Some(reason) = stop {
            let (_, remaining) = partition_covered(&lines, batch);
            return (remaining, lines, reason);
        }
    }
    (batch.to_vec(), Vec::new(), StopReason::Exhausted)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Reduced,
    NoInstance,
}

/// Lines forced together, with the richness they were required to have
/// against the points uncovered at that moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingRound {
    pub lines: Vec<CanonicalLine>,
    pub threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelResult {
    pub kernel: PointSet,
    pub k_prime: usize,
    /// All forced lines, in the order they were found.
    pub forced_lines: Vec<CanonicalLine>,
    pub verdict: Verdict,
    pub rounds: Vec<ForcingRound>,
}

impl KernelResult {
    fn reduced(kernel: Vec<Point>, k_prime: usize, rounds: Vec<ForcingRound>) -> Self {
        KernelResult {
            kernel: PointSet::from_distinct(kernel),
            k_prime,
            forced_lines: rounds.iter().flat_map(|r| r.lines.iter().copied()).collect(),
            verdict: Verdict::Reduced,
            rounds,
        }
    }

    /// The canonical no-instance: one point and no lines to spend.
    fn no_instance(rounds: Vec<ForcingRound>) -> Self {
        KernelResult {
            kernel: PointSet::from_distinct(vec![Point::new(0, 0).expect("origin is in range")]),
            k_prime: 0,
            forced_lines: rounds.iter().flat_map(|r| r.lines.iter().copied()).collect(),
            verdict: Verdict::NoInstance,
            rounds,
        }
    }
}

/// Tag of the child generator used for the final rich-lines call.
const TAIL_STREAM: u64 = u64::MAX;

pub fn kernelize(s: &PointSet, k: usize, variant: Variant, rng: &mut SeededRng) -> Result<KernelResult> {
    if s.is_empty() {
        return Err(Error::TooFewPoints {
            required: 1,
            actual: 0,
        });
    }
    if k == 0 {
        return Err(Error::InvalidK {
            k,
            reason: "k must be at least 1",
        });
    }
    if k < MIN_SCHEDULE_K {
        return kernelize_small(s, k);
    }
    let sched = build_schedule(k, variant)?;
    let sigma = sched.sigma();
    let k_sq = k * k;
    let pts = s.as_slice();

    let mut forced: Vec<CanonicalLine> = Vec::new();
    let mut rounds: Vec<ForcingRound> = Vec::new();
    let mut batch: Vec<Point> = Vec::with_capacity(sigma);
    let mut cursor = 0;
    let mut batch_index = 0u64;

    while forced.len() <= k {
        while batch.len() < sigma && cursor < pts.len() {
            let q = pts[cursor];
            cursor += 1;
            if !is_covered(&forced, q) {
                batch.push(q);
            }
        }

        if batch.len() == sigma {
            let (remaining, mut lines, _) = ladder(&batch, &sched, &mut rng.fork(batch_index));
            batch_index += 1;
            if lines.is_empty() {
                // Only an exact empty answer proves the batch uncoverable.
                lines = det_points(&batch, k + 1).canonical_lines();
                if lines.is_empty() {
                    return Ok(KernelResult::no_instance(rounds));
                }
                batch.retain(|p| !is_covered(&lines, *p));
            } else {
                batch = remaining;
            }
            forced.extend_from_slice(&lines);
            rounds.push(ForcingRound {
                lines,
                threshold: k + 1,
            });
            continue;
        }

        if batch.len() > k_sq {
            let report = match variant {
                Variant::Deterministic => det_points(&batch, k + 1),
                Variant::Randomized => {
                    let params = compute_params(batch.len(), k + 1)?;
                    rand_points(&batch, k + 1, &params, &mut rng.fork(TAIL_STREAM))
                }
            };
            force_report(&report, &mut batch, &mut forced, &mut rounds, k + 1);
            if forced.len() <= k && batch.len() > k_sq {
                // A randomized miss must not turn into a no-instance.
                let exact = det_points(&batch, k + 1);
                force_report(&exact, &mut batch, &mut forced, &mut rounds, k + 1);
            }
            if forced.len() > k || batch.len() > k_sq {
                return Ok(KernelResult::no_instance(rounds));
            }
        }
        return Ok(KernelResult::reduced(batch, k - forced.len(), rounds));
    }
    Ok(KernelResult::no_instance(rounds))
}

fn force_report(
    report: &RichLineReport,
    batch: &mut Vec<Point>,
    forced: &mut Vec<CanonicalLine>,
    rounds: &mut Vec<ForcingRound>,
    threshold: usize,
) {
    if report.is_empty() {
        return;
    }
    let lines = report.canonical_lines();
    batch.retain(|p| !is_covered(&lines, *p));
    forced.extend_from_slice(&lines);
    rounds.push(ForcingRound { lines, threshold });
}

/// Kernel for `1 <= k <= 15`, using the exact engine on batches of
/// `k'^2 + 1` uncovered points, where `k'` is the number of lines still
/// available.
pub fn kernelize_small(s: &PointSet, k: usize) -> Result<KernelResult> {
    if k == 0 || k >= MIN_SCHEDULE_K {
        return Err(Error::InvalidK {
            k,
            reason: "the small-k procedure needs 1 <= k <= 15",
        });
    }
    let pts = s.as_slice();
    if pts.len() <= k * k {
        return Ok(KernelResult::reduced(pts.to_vec(), k, Vec::new()));
    }
    let mut residual = k;
    let mut forced: Vec<CanonicalLine> = Vec::new();
    let mut rounds: Vec<ForcingRound> = Vec::new();
    let mut batch: Vec<Point> = Vec::new();
    let mut cursor = 0;
    loop {
        let want = residual * residual + 1;
        while batch.len() < want && cursor < pts.len() {
            let q = pts[cursor];
            cursor += 1;
            if !is_covered(&forced, q) {
                batch.push(q);
            }
        }
        if batch.len() < want {
            break;
        }
        if residual == 0 {
            return Ok(KernelResult::no_instance(rounds));
        }
        let lines = det_points(&batch, residual + 1).canonical_lines();
        if lines.is_empty() || forced.len() + lines.len() > k {
            return Ok(KernelResult::no_instance(rounds));
        }
        batch.retain(|p| !is_covered(&lines, *p));
        forced.extend_from_slice(&lines);
        rounds.push(ForcingRound {
            lines,
            threshold: residual + 1,
        });
        residual = k - forced.len();
    }
    Ok(KernelResult::reduced(batch, residual, rounds))
}
