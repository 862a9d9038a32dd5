mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "vantage", version, about = "Orderings of point sets by sums of distances to vantage points")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sampled parameters.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub trials: u64,
    /// Largest working precision for certified comparisons, in bits.
    #[arg(long, global = true, default_value_t = vantage::scalar::DEFAULT_PRECISION_CAP)]
    pub precision_cap: u32,
    /// Grid spacing for the six-point verification.
    #[arg(long, global = true, default_value = "1/50")]
    pub grid_step: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write a run report (inputs, digests, timing) to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank a point set by a vantage multiset.
    Rank { points: PathBuf, multiset: PathBuf },
    /// Exact catalog of orderings: one vantage point in dimension 1 or 2,
    /// or `k` vantage points on a line.
    Enum {
        points: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Sampled catalog of orderings with `k` vantage points.
    Estimate {
        points: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Evaluate a counting formula.
    Bounds {
        #[arg(value_enum)]
        formula: Formula,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        delta: Option<u64>,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Explicit constructions.
    #[command(subcommand)]
    Construct(Construct),
    /// Witness multisets for a target ordering.
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        points: PathBuf,
        /// Target ordering as comma-separated indices, closest first.
        #[arg(long)]
        ordering: String,
    },
    /// Protrusive orderings that no construction or sampling run has
    /// witnessed. Experimental: an empty result is not a proof.
    Unwitnessed {
        points: PathBuf,
        /// Largest number of sampled vantage points.
        #[arg(long, default_value_t = 3)]
        max_k: usize,
    },
    /// Certified verifications.
    #[command(subcommand)]
    Verify(Verify),
    /// SVG figures.
    #[command(subcommand)]
    Plot(Plot),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    GoodTideman,
    Stirling,
    Warren,
    RadicalWarren,
    Exponent,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    D1,
    Distmatrix,
    Affine,
    Four,
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Two flanking clusters on a line and their hat orderings.
    D1Flank {
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Random flanked instances and the scale where composition stabilizes.
    Flanked {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        instances: usize,
    },
    /// Check orderings from a good vantage pair of a planar set.
    CheckOrderings { points: PathBuf },
    /// Recursive lower-bound configuration.
    LowerBound {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// The six-point configuration whose protrusive ordering is unrealisable.
    Sixpoint {
        #[arg(long, default_value = "5/2")]
        far_threshold: String,
    },
    /// Sign patterns of the alternating radical family.
    Noga {
        #[arg(long, default_value_t = 8)]
        len: usize,
        #[arg(long, default_value = "1/5")]
        delta: String,
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// Expansion of the product over conjugate roots of unity.
    Galois {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Plot {
    /// The six-point configuration.
    Sixpoint,
    /// A planar point set.
    Points { points: PathBuf },
    /// Perpendicular bisectors of a planar point set with their cells.
    Bisectors { points: PathBuf },
    /// A flanked configuration on a line, log-compressed.
    Flanked {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match output::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
