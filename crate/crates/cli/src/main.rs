//! `planar-cover`: reproducible experiments on random-walk cover times,
//! effective resistances and circle packings of planar graphs.
//!
//! Exit status: 0 when every check passes, 1 when a checked bound or
//! identity fails, 2 on usage or input errors, 3 on numerical failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use planar_cover::electrical::DEFAULT_SOLVER_TOL;
use planar_cover::experiments::DEFAULT_TRIALS;
use planar_cover::packing::DEFAULT_ANGLE_TOL;
use planar_cover::separation::DEFAULT_S;

#[derive(Debug, Parser)]
#[command(name = "planar-cover", version, about = "Cover times, resistances and circle packings on planar graphs")]
struct Cli {
    /// Log progress to standard error; repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

/// Where the input graph comes from.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Graph JSON file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Generated family, e.g. `grid(4)`, `path:16`, `k4`.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a family member as graph JSON.
    Gen {
        /// Family, e.g. `grid(4)`.
        #[arg(long)]
        family: String,
        /// Complete to a triangulation before writing.
        #[arg(long)]
        triangulate: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Circle-pack a triangulation with unit outer disks.
    Pack {
        #[command(flatten)]
        source: GraphSource,
        /// Outer face `a,b,c`; the first traced face when absent.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        outer: Option<Vec<usize>>,
        /// Angle-sum tolerance.
        #[arg(long, default_value_t = DEFAULT_ANGLE_TOL)]
        tol: f64,
        /// Triangulate the input first.
        #[arg(long)]
        triangulate: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Effective resistances as CSV.
    Resist {
        #[command(flatten)]
        source: GraphSource,
        /// Pairs `u-v`, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "all_pairs")]
        pairs: Vec<String>,
        #[arg(long)]
        all_pairs: bool,
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Hitting times `H(v, target)` for every `v` as CSV.
    Hit {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo cover time as CSV.
    Cover {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Matthews bounds as JSON.
    Matthews {
        #[command(flatten)]
        source: GraphSource,
        /// Subset `V0` for the lower bound; all vertices when absent.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Select a well-separated subset from a packed triangulation.
    Select {
        /// Triangulation JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// Packing JSON file for the same triangulation.
        #[arg(long)]
        packing: PathBuf,
        /// `all` or a comma-separated vertex list.
        #[arg(long, default_value = "all")]
        subset: String,
        #[arg(long, default_value_t = DEFAULT_S)]
        s: f64,
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Check pairwise resistances of a vertex set against a threshold.
    Verify {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<usize>,
        #[arg(long)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Identity checks between walk and resistance quantities as CSV.
    Suite {
        /// Family template, e.g. `grid`.
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Largest admissible violation.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        solver_tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Cover-time scaling across family sizes as CSV.
    Scaling {
        #[arg(long, default_value = "grid")]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        tol: f64,
        /// Skip the Matthews bounds.
        #[arg(long)]
        no_matthews: bool,
        /// Write the full JSON report instead of CSV.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Triangulate, pack, select and verify across family sizes as JSON.
    Pipeline {
        #[arg(long, default_value = "grid")]
        family: String,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_S)]
        s: f64,
        #[arg(long, default_value_t = DEFAULT_SOLVER_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_ANGLE_TOL)]
        packing_tol: f64,
        #[command(flatten)]
        out: Output,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match commands::run(cli.command) {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fail(reason)) => {
            eprintln!("check failed: {reason}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
