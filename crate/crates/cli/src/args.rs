use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use prefattach::verify::{Suite, DEFAULT_SEED};
use serde::Serialize;

/// Experiments on preferential attachment trees and their looptrees.
///
/// Every subcommand is a pure function of its flags and `--rng`. Flags can
/// also come from a TOML file given with `--config`, whose keys are the
/// long flag names; flags on the command line win.
#[derive(Parser, Debug)]
#[command(name = "prefattach", version, args_override_self = true)]
pub struct Cli {
    /// TOML file with flag values for the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for replicate loops.
    #[arg(long, global = true, env = "PREFATTACH_THREADS")]
    pub threads: Option<usize>,

    /// Output directory. Without it the main artifact goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Serialize, Debug, Clone)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Grow one tree and write its trajectory, or its exact law.
    Grow(GrowArgs),
    /// Grow trees, build their looptrees and record sizes and diameters.
    Looptree(LooptreeArgs),
    /// Track an embedding count and its martingale along growth runs.
    Observe(ObserveArgs),
    /// Monte Carlo total variation lower bounds between two seeds.
    Discriminate(DiscriminateArgs),
    /// Exact total variation between two seeds for small sizes.
    ExactTv(ExactTvArgs),
    /// Gromov-Hausdorff bounds between two finite metric spaces.
    Ghdist(GhdistArgs),
    /// Ball-volume dimension estimate on a looptree or a fixture graph.
    Dimension(DimensionArgs),
    /// Sample the line-breaking construction.
    Linebreak(LinebreakArgs),
    /// Run the acceptance checks and print a JSON report.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Grow(_) => "grow",
            Command::Looptree(_) => "looptree",
            Command::Observe(_) => "observe",
            Command::Discriminate(_) => "discriminate",
            Command::ExactTv(_) => "exact-tv",
            Command::Ghdist(_) => "ghdist",
            Command::Dimension(_) => "dimension",
            Command::Linebreak(_) => "linebreak",
            Command::Verify(_) => "verify",
        }
    }

    /// Master seed, for commands that draw random numbers.
    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Grow(a) => Some(a.rng),
            Command::Looptree(a) => Some(a.rng),
            Command::Observe(a) => Some(a.rng),
            Command::Discriminate(a) => Some(a.rng),
            Command::Dimension(a) => Some(a.rng),
            Command::Linebreak(a) => Some(a.rng),
            Command::Verify(a) => Some(a.rng),
            Command::ExactTv(_) | Command::Ghdist(_) => None,
        }
    }
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Lpam,
    Remy,
    Ford,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Arithmetic {
    Float,
    Exact,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    Looptree,
    Circle,
    Grid,
}

#[derive(Args, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub struct GrowArgs {
    #[arg(long, value_enum, default_value_t = Model::Lpam)]
    pub model: Model,
    /// `planted`, `path<k>`, `star<k>`, a parenthesis string (prefix
    /// `planted:` for a planted one), or `@file`.
    #[arg(long, default_value = "planted")]
    pub seed_tree: String,
    /// Final number of vertices (lpam) or of leaves minus one (remy, ford).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Split weight for the ford model.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Use the modified ford rule.
    #[arg(long)]
    pub modified: bool,
    /// `exact` writes the law of the final shape instead of a sample.
    #[arg(long, value_enum, default_value_t = Arithmetic::Float)]
    pub arithmetic: Arithmetic,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub rng: u64,
}

#[derive(Args, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub struct LooptreeArgs {
    #[arg(long, default_value = "planted")]
    pub seed_tree: String,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 1)]
    pub reps: u64,
    /// Also write the distance table of the first replicate.
    #[arg(long)]
    pub metric: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub rng: u64,
}

#[derive(Args, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub struct ObserveArgs {
    #[arg(long, default_value = "path4")]
    pub seed_tree: String,
    /// Decorated pattern, e.g. `(1(1))`.
    #[arg(long, default_value = "(1(1))")]
    pub tau: String,
    /// Sizes at which each run is recorded.
    #[arg(long, value_delimiter = ',', default_values_t = vec![100, 1000])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub reps: u64,
    #[arg(long, value_enum, default_value_t = Arithmetic::Float)]
    pub arithmetic: Arithmetic,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub rng: u64,
}

#[derive(Args, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub struct DiscriminateArgs {
    #[arg(long, default_value = "path4")]
    pub s1: String,
    #[arg(long, default_value = "star4")]
    pub s2: String,
    /// Pattern to use; defaults to a canonical witness for the two seeds.
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![500, 1000])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub rng: u64,
}

#[derive(Args, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub struct ExactTvArgs {
    #[arg(long, default_value = "path4")]
    pub s1: String,
    #[arg(long, default_value = "star4")]
    pub s2: String,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long, default_value_t = 9)]
    pub n_max: usize,
}

#[derive(Args, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub struct GhdistArgs {
    /// Metric space CSV, as written by `looptree --metric`.
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long)]
    pub y: PathBuf,
    /// File of `i,j` lines pairing points of x and y.
    #[arg(long)]
    pub correspondence: Option<PathBuf>,
    /// Compute the exact distance (small spaces only).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub struct DimensionArgs {
    #[arg(long, value_enum, default_value_t = Fixture::Looptree)]
    pub fixture: Fixture,
    #[arg(long, default_value = "planted")]
    pub seed_tree: String,
    /// Tree size for looptrees, vertex count for the circle and grid.
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 200)]
    pub centers: usize,
    /// Smallest radius as a fraction of the diameter.
    #[arg(long, default_value_t = 0.02)]
    pub r_min: f64,
    #[arg(long, default_value_t = 0.2)]
    pub r_max: f64,
    /// Number of geometrically spaced radii.
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub rng: u64,
}

#[derive(Args, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub struct LinebreakArgs {
    /// Number of circles.
    #[arg(long, default_value_t = 1000)]
    pub k: usize,
    /// Discretization points per unit length.
    #[arg(long, default_value_t = 16.0)]
    pub resolution: f64,
    #[arg(long, default_value_t = 10)]
    pub reps: u64,
    /// Also write the distance table of the first replicate.
    #[arg(long)]
    pub metric: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub rng: u64,
}

#[derive(Args, Serialize, Debug, Clone)]
#[serde(rename_all = "kebab-case")]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: Option<Suite>,
    /// Time limit in seconds; criteria not started in time are skipped.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Criterion ids to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub rng: u64,
}
