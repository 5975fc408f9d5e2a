//! Benchmark harness: generate instances, time one algorithm body per record,
//! check against an oracle when the instance is small enough, emit CSV.
//!
//! The configuration is a flat `key = value` file. `#` starts a comment.
//!
//! | key            | meaning                                                   | default        |
//! |----------------|-----------------------------------------------------------|----------------|
//! | `task`         | `rich_lines`, `exact_fit` or `kernelize`                  | `rich_lines`   |
//! | `algos`        | comma list from `rand`, `det`, `brute` (`brute`: rich lines only) | `rand,det` |
//! | `n`            | comma list of instance sizes                              | empty          |
//! | `lambda`       | comma list of integers or `sqrt_nlogn` (rich lines)       | `sqrt_nlogn`   |
//! | `k`            | comma list of cover budgets (kernelize)                   | `16`           |
//! | `workload`     | `planted_rich`, `grid`, `genpos` or `planted_cover`       | by task        |
//! | `seeds`        | comma list of seeds, or a range `a..b` (end exclusive)    | `0`            |
//! | `coord_bound`  | coordinate box for random workloads                       | `1000000`      |
//! | `oracle_max_n` | largest `n` checked against the exact oracle              | `500`          |
//! | `parallel`     | `true` runs instances on all available threads            | `false`        |
//!
//! A config without any `n` yields no records.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::exact_fit::{exact_fit, FitMode};
use crate::generators::{gen_general_position, gen_grid, gen_planted_cover, gen_planted_rich, GroundTruth};
use crate::geom::{covered_subset, PointSet};
use crate::kernel::{kernelize, KernelResult, Variant, Verdict};
use crate::rich_lines::{rich_lines_brute, rich_lines_det, rich_lines_rand, RichLineReport};
use crate::sampling::SeededRng;

pub const CSV_HEADER: &str = "algo,n,param,seed,wall_ns,out_size,correct";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    RichLines,
    ExactFit,
    Kernelize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Rand,
    Det,
    Brute,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Rand => "rand",
            Algo::Det => "det",
            Algo::Brute => "brute",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workload {
    PlantedRich,
    Grid,
    GeneralPosition,
    PlantedCover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaSpec {
    Fixed(usize),
    SqrtNLogN,
}

impl LambdaSpec {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            LambdaSpec::Fixed(l) => l,
            LambdaSpec::SqrtNLogN => {
                let nf = n as f64;
                (nf * nf.ln()).sqrt().ceil() as usize
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub task: Task,
    pub algos: Vec<Algo>,
    pub n: Vec<usize>,
    pub lambda: Vec<LambdaSpec>,
    pub k: Vec<usize>,
    pub workload: Workload,
    pub seeds: Vec<u64>,
    pub coord_bound: i64,
    pub oracle_max_n: usize,
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            task: Task::RichLines,
            algos: vec![Algo::Rand, Algo::Det],
            n: Vec::new(),
            lambda: vec![LambdaSpec::SqrtNLogN],
            k: vec![16],
            workload: Workload::PlantedRich,
            seeds: vec![0],
            coord_bound: 1_000_000,
            oracle_max_n: 500,
            parallel: false,
        }
    }
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn list<T>(line: usize, value: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(s).ok_or_else(|| bad(line, format!("invalid list item `{s}`"))))
        .collect()
}

pub fn parse_config(text: &str) -> Result<BenchConfig> {
    let mut cfg = BenchConfig::default();
    let mut workload_set = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| bad(line, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "task" => {
                cfg.task = match value {
                    "rich_lines" => Task::RichLines,
                    "exact_fit" => Task::ExactFit,
                    "kernelize" => Task::Kernelize,
                    _ => return Err(bad(line, format!("unknown task `{value}`"))),
                }
            }
            "algos" => {
                cfg.algos = list(line, value, |s| match s {
                    "rand" => Some(Algo::Rand),
                    "det" => Some(Algo::Det),
                    "brute" => Some(Algo::Brute),
                    _ => None,
                })?
            }
            "n" => cfg.n = list(line, value, |s| s.parse().ok())?,
            "lambda" => {
                cfg.lambda = list(line, value, |s| match s {
                    "sqrt_nlogn" => Some(LambdaSpec::SqrtNLogN),
                    _ => s.parse().ok().map(LambdaSpec::Fixed),
                })?
            }
            "k" => cfg.k = list(line, value, |s| s.parse().ok())?,
            "workload" => {
                workload_set = true;
                cfg.workload = match value {
                    "planted_rich" => Workload::PlantedRich,
                    "grid" => Workload::Grid,
                    "genpos" => Workload::GeneralPosition,
                    "planted_cover" => Workload::PlantedCover,
                    _ => return Err(bad(line, format!("unknown workload `{value}`"))),
                }
            }
            "seeds" => {
                cfg.seeds = match value.split_once("..") {
                    Some((a, b)) => {
                        let a: u64 = a.trim().parse().map_err(|_| bad(line, "invalid seed range"))?;
                        let b: u64 = b.trim().parse().map_err(|_| bad(line, "invalid seed range"))?;
                        (a..b).collect()
                    }
                    None => list(line, value, |s| s.parse().ok())?,
                }
            }
            "coord_bound" => cfg.coord_bound = value.parse().map_err(|_| bad(line, "invalid coord_bound"))?,
            "oracle_max_n" => cfg.oracle_max_n = value.parse().map_err(|_| bad(line, "invalid oracle_max_n"))?,
            "parallel" => {
                cfg.parallel = value.parse().map_err(|_| bad(line, "parallel must be true or false"))?;
            }
            _ => return Err(bad(line, format!("unknown key `{key}`"))),
        }
    }
    if !workload_set && cfg.task == Task::Kernelize {
        cfg.workload = Workload::PlantedCover;
    }
    if cfg.task != Task::RichLines && cfg.algos.contains(&Algo::Brute) {
        return Err(bad(0, "algo `brute` is only available for rich_lines"));
    }
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub algo: Algo,
    pub n: usize,
    pub param: usize,
    pub seed: u64,
    pub wall_ns: u128,
    pub out_size: usize,
    pub correct: Option<bool>,
}

struct Job {
    n: usize,
    param: usize,
    seed: u64,
}

fn jobs(cfg: &BenchConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for &n in &cfg.n {
        let params: Vec<usize> = match cfg.task {
            Task::RichLines => cfg.lambda.iter().map(|l| l.resolve(n)).collect(),
            Task::ExactFit => vec![0],
            Task::Kernelize => cfg.k.clone(),
        };
        for &param in &params {
            for &seed in &cfg.seeds {
                out.push(Job { n, param, seed });
            }
        }
    }
    out
}

struct Instance {
    points: PointSet,
    truth: Option<GroundTruth>,
}

fn generate(cfg: &BenchConfig, job: &Job) -> Result<Instance> {
    let mut rng = SeededRng::new(job.seed);
    let plain = |points| Instance { points, truth: None };
    Ok(match cfg.workload {
        Workload::PlantedRich => {
            let lambda = if cfg.task == Task::RichLines { job.param } else { (job.n / 10).max(2) };
            plain(gen_planted_rich(job.n, lambda.min(job.n), cfg.coord_bound, &mut rng)?)
        }
        Workload::Grid => {
            let side = (job.n as f64).sqrt().ceil() as usize;
            plain(gen_grid(job.n.div_ceil(side), side)?)
        }
        Workload::GeneralPosition => {
            let inst = gen_general_position(job.n, cfg.coord_bound, &mut rng)?;
            Instance {
                points: inst.points,
                truth: Some(GroundTruth::No(String::new())),
            }
        }
        Workload::PlantedCover => {
            let k = if cfg.task == Task::Kernelize { job.param } else { 16 };
            let inst = gen_planted_cover(k.max(1), (job.n / k.max(1)).max(2), cfg.coord_bound, &mut rng)?;
            Instance {
                points: inst.points,
                truth: inst.ground_truth,
            }
        }
    })
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u128)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_nanos().max(1)))
}

fn run_job(cfg: &BenchConfig, job: &Job) -> Result<Vec<BenchRecord>> {
    let inst = generate(cfg, job)?;
    let s = &inst.points;
    let checked = s.len() <= cfg.oracle_max_n;
    let mut records = Vec::with_capacity(cfg.algos.len());
    for &algo in &cfg.algos {
        let mut rng = SeededRng::new(job.seed);
        let (out_size, wall_ns, correct) = match cfg.task {
            Task::RichLines => {
                let lambda = job.param.clamp(2, s.len().max(2));
                let (report, ns) = timed(|| match algo {
                    Algo::Rand => rich_lines_rand(s, lambda, &mut rng),
                    Algo::Det => rich_lines_det(s, lambda),
                    Algo::Brute => rich_lines_brute(s, lambda),
                })?;
                let correct = checked.then(|| rich_lines_brute(s, lambda).map(|b| same_lines(&report, &b))).transpose()?;
                (report.len(), ns, correct)
            }
            Task::ExactFit => {
                let mode = if algo == Algo::Rand { FitMode::Rand } else { FitMode::Det };
                let (fit, ns) = timed(|| exact_fit(s, mode, &mut rng))?;
                let correct = checked
                    .then(|| {
                        rich_lines_brute(s, 2).map(|b| b.lines.iter().map(|ic| ic.count).max() == Some(fit.count))
                    })
                    .transpose()?;
                (fit.count, ns, correct)
            }
            Task::Kernelize => {
                let variant = if algo == Algo::Rand { Variant::Randomized } else { Variant::Deterministic };
                let (result, ns) = timed(|| kernelize(s, job.param, variant, &mut rng))?;
                let correct = inst.truth.as_ref().map(|t| kernel_consistent(&result, job.param, t));
                (result.kernel.len(), ns, correct)
            }
        };
        records.push(BenchRecord {
            algo,
            n: s.len(),
            param: job.param,
            seed: job.seed,
            wall_ns,
            out_size,
            correct,
        });
    }
    Ok(records)
}

fn same_lines(a: &RichLineReport, b: &RichLineReport) -> bool {
    a.lines == b.lines
}

fn kernel_consistent(result: &KernelResult, k: usize, truth: &GroundTruth) -> bool {
    let size_ok = result.kernel.len() <= k * k;
    match truth {
        GroundTruth::Yes(witness) => {
            size_ok
                && result.verdict == Verdict::Reduced
                && result.forced_lines.iter().all(|l| witness.contains(l))
                && covered_subset(witness, &result.kernel).1.is_empty()
        }
        // The kernel is a subset of a general-position set, so it is
        // coverable by k' lines exactly when it has at most 2k' points.
        GroundTruth::No(_) => {
            size_ok && (result.verdict == Verdict::NoInstance || result.kernel.len() > 2 * result.k_prime)
        }
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let jobs = jobs(cfg);
    let threads = if cfg.parallel {
        std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1))
    } else {
        1
    };
    if threads <= 1 {
        let mut out = Vec::new();
        for job in &jobs {
            out.extend(run_job(cfg, job)?);
        }
        return Ok(out);
    }
    let mut slots: Vec<Option<Result<Vec<BenchRecord>>>> = (0..jobs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = jobs.len().div_ceil(threads);
        for (job_chunk, slot_chunk) in jobs.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (job, slot) in job_chunk.iter().zip(slot_chunk) {
                    *slot = Some(run_job(cfg, job));
                }
            });
        }
    });
    let mut out = Vec::new();
    for slot in slots {
        out.extend(slot.expect("every job ran")?);
    }
    Ok(out)
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let correct = match r.correct {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.algo.name(),
            r.n,
            r.param,
            r.seed,
            r.wall_ns,
            r.out_size,
            correct
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_is_header_only() {
        let cfg = parse_config("# nothing configured\n").unwrap();
        let records = run_bench(&cfg).unwrap();
        assert!(records.is_empty());
        assert_eq!(to_csv(&records), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn sqrt_nlogn_resolves() {
        assert_eq!(LambdaSpec::SqrtNLogN.resolve(100_000), 1073);
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        assert!(matches!(parse_config("task = rich_lines\nbogus = 1").unwrap_err(), Error::Parse { line: 2, .. }));
        assert!(matches!(parse_config("n = 1,x").unwrap_err(), Error::Parse { line: 1, .. }));
        assert!(parse_config("task = kernelize\nalgos = brute").is_err());
    }

    #[test]
    fn small_suite_is_checked() {
        let cfg = parse_config("n = 200\nlambda = 20\nalgos = rand,det,brute\nseeds = 0..2").unwrap();
        let records = run_bench(&cfg).unwrap();
        assert_eq!(records.len(), 6);
        assert!(records.iter().all(|r| r.correct == Some(true) && r.wall_ns > 0));
    }
}
