//! Exact planar point-line incidence algorithms: rich lines, line fitting and
//! kernelization for covering points with few lines.

pub mod bench;
pub mod error;
pub mod exact_fit;
pub mod generators;
pub mod geom;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod rich_lines;
pub mod sampling;

pub use error::{Error, Result};
pub use geom::{covered_subset, incidences, line_through, CanonicalLine, IncidenceCount, Point, PointIndex, PointSet};
pub use rich_lines::{compute_params, rich_lines_brute, rich_lines_det, rich_lines_rand, RandomizedParams, Regime, RichLineReport};
pub use sampling::{sample_pairs, sample_without_replacement, SeededRng, DEFAULT_SEED};
pub use kernel::{
    build_schedule, kernelize, kernelize_small, saturated_lines, ForcingRound, KernelResult, SaturatedLinesResult, SaturationSchedule,
    StopReason, Variant, Verdict,
};
pub use exact_fit::{exact_fit, FitMode, FitResult};
pub use generators::{
    gen_general_position, gen_grid, gen_planted_cover, gen_planted_cover_sizes, gen_planted_rich, fuzz_corpus, general_position_truth, pair_cover, CoverInstance,
    GroundTruth,
};
pub use oracle::{solve_cover, CoverAnswer};
