use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pointline::bench::{parse_config, run_bench, to_csv};
use pointline::io::{parse_points, write_counts, write_lines, write_points};
use pointline::{
    exact_fit, gen_general_position, gen_grid, gen_planted_cover, gen_planted_rich, general_position_truth, kernelize,
    rich_lines_brute, rich_lines_det, rich_lines_rand, solve_cover, CoverAnswer, CoverInstance, Error, FitMode, GroundTruth,
    PointSet, SeededRng, Variant, Verdict, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(name = "pointline", version, about = "Rich lines, exact fitting and Line Cover kernels on integer points")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Point file to read (standard input when omitted).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// File for the main output (standard output when omitted).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set.
    Gen(GenArgs),
    /// List every line through at least `lambda` points.
    RichLines {
        #[arg(long)]
        lambda: usize,
        #[arg(long, value_enum, default_value_t = RichAlgo::Rand)]
        algo: RichAlgo,
    },
    /// Find a line through the most points.
    ExactFit {
        #[arg(long, value_enum, default_value_t = FitAlgo::Rand)]
        algo: FitAlgo,
    },
    /// Reduce a Line Cover instance to at most k^2 points.
    Kernelize {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = FitAlgo::Rand)]
        algo: FitAlgo,
        #[arg(long)]
        out_kernel: Option<PathBuf>,
        #[arg(long)]
        out_lines: Option<PathBuf>,
    },
    /// Decide a small Line Cover instance exactly.
    Solve {
        #[arg(long)]
        k: usize,
    },
    /// Run a benchmark suite and write CSV.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    /// Ground-truth file for `cover` and `genpos` (defaults to `<output>.truth`).
    #[arg(long, global = true)]
    truth: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Integer grid {0..cols-1} x {0..rows-1}.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Points on k random lines.
    Cover {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        per_line: usize,
        #[arg(long, default_value_t = 1_000_000)]
        coord_bound: i64,
    },
    /// Points with no three collinear.
    Genpos {
        #[arg(long)]
        n: usize,
        /// Budget recorded in the ground truth (default: ceil(n/2) - 1).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        coord_bound: i64,
    },
    /// One line with lambda points plus scattered fillers.
    Rich {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: usize,
        #[arg(long, default_value_t = 1_000_000)]
        coord_bound: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RichAlgo {
    Rand,
    Det,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitAlgo {
    Rand,
    Det,
}

enum Failure {
    Usage(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn read_input(path: Option<&Path>) -> Result<PointSet, Failure> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| io_failure(p, e))?,
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Usage(format!("standard input: {e}")))?;
            buf
        }
    };
    Ok(parse_points(&text)?)
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Usage(format!("standard output: {e}")))
        }
    }
}

fn truth_text(k: usize, truth: &GroundTruth) -> String {
    match truth {
        GroundTruth::Yes(lines) => format!("# k={k} answer=YES\n{}", write_lines(lines)),
        GroundTruth::No(reason) => format!("# k={k} answer=NO\n# {reason}\n"),
    }
}

fn run_gen(cli: &Cli, args: &GenArgs) -> Result<(), Failure> {
    let mut rng = SeededRng::new(cli.seed);
    let (points, truth) = match args.kind {
        GenKind::Grid { rows, cols } => (gen_grid(rows, cols)?, None),
        GenKind::Cover { k, per_line, coord_bound } => {
            let CoverInstance { points, k, ground_truth } = gen_planted_cover(k, per_line, coord_bound, &mut rng)?;
            (points, ground_truth.map(|t| (k, t)))
        }
        GenKind::Genpos { n, k, coord_bound } => {
            let inst = gen_general_position(n, coord_bound, &mut rng)?;
            let k = k.unwrap_or(inst.k);
            let truth = general_position_truth(&inst.points, k);
            (inst.points, Some((k, truth)))
        }
        GenKind::Rich { n, lambda, coord_bound } => (gen_planted_rich(n, lambda, coord_bound, &mut rng)?, None),
    };
    write_to(cli.output.as_deref(), &write_points(&points))?;
    if let Some((k, truth)) = truth {
        let sidecar = args
            .truth
            .clone()
            .or_else(|| cli.output.as_ref().map(|o| PathBuf::from(format!("{}.truth", o.display()))));
        if let Some(path) = sidecar {
            write_to(Some(&path), &truth_text(k, &truth))?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let output = cli.output.as_deref();
    match &cli.command {
        Command::Gen(args) => run_gen(cli, args),
        Command::RichLines { lambda, algo } => {
            let s = read_input(cli.input.as_deref())?;
            let report = match algo {
                RichAlgo::Rand => rich_lines_rand(&s, *lambda, &mut SeededRng::new(cli.seed))?,
                RichAlgo::Det => rich_lines_det(&s, *lambda)?,
                RichAlgo::Brute => rich_lines_brute(&s, *lambda)?,
            };
            let mut text = write_counts(&report.lines);
            text.push_str(&format!(
                "# n={} lambda={} found={} aborted={}\n",
                report.n,
                report.lambda,
                report.len(),
                report.aborted
            ));
            write_to(output, &text)
        }
        Command::ExactFit { algo } => {
            let s = read_input(cli.input.as_deref())?;
            let mode = match algo {
                FitAlgo::Rand => FitMode::Rand,
                FitAlgo::Det => FitMode::Det,
            };
            let fit = exact_fit(&s, mode, &mut SeededRng::new(cli.seed))?;
            write_to(output, &format!("{} {}\n", fit.line, fit.count))
        }
        Command::Kernelize {
            k,
            algo,
            out_kernel,
            out_lines,
        } => {
            let s = read_input(cli.input.as_deref())?;
            let variant = match algo {
                FitAlgo::Rand => Variant::Randomized,
                FitAlgo::Det => Variant::Deterministic,
            };
            let result = kernelize(&s, *k, variant, &mut SeededRng::new(cli.seed))?;
            if let Some(path) = out_kernel {
                write_to(Some(path), &write_points(&result.kernel))?;
            }
            if let Some(path) = out_lines {
                write_to(Some(path), &write_lines(&result.forced_lines))?;
            }
            let verdict = match result.verdict {
                Verdict::Reduced => "REDUCED",
                Verdict::NoInstance => "NO_INSTANCE",
            };
            write_to(
                output,
                &format!(
                    "# verdict={verdict} kernel_size={} k_prime={} forced={}\n",
                    result.kernel.len(),
                    result.k_prime,
                    result.forced_lines.len()
                ),
            )
        }
        Command::Solve { k } => {
            let s = read_input(cli.input.as_deref())?;
            let text = match solve_cover(&s, *k)? {
                CoverAnswer::Yes(lines) => format!("YES\n{}", write_lines(&lines)),
                CoverAnswer::No => "NO\n".to_string(),
            };
            write_to(output, &text)
        }
        Command::Bench { config } => {
            let text = fs::read_to_string(config).map_err(|e| io_failure(config, e))?;
            let cfg = parse_config(&text)?;
            let records = run_bench(&cfg)?;
            write_to(output, &to_csv(&records))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
