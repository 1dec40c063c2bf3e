use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gstsp_cli::commands::{
    cmd_distribution, cmd_generate, cmd_shift_curve, cmd_solve, cmd_sweep, GapsMode, ShiftCurveOpts,
    SolveOpts, SweepOpts,
};
use gstsp_cli::error::{CliError, CliResult};
use gstsp_cli::method::Method;

/// TSP benchmarking: a Gumbel-Sinkhorn relaxation solver with a coprime
/// cyclic-shift ensemble, classical baselines, and exact small-n oracles.
#[derive(Parser)]
#[command(name = "gstsp", version)]
struct Cli {
    /// Worker threads for batch runs (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate uniform instances in [0,1]^2 and write the instance file.
    Generate {
        /// Cities per instance (n >= 3).
        #[arg(long)]
        n: usize,
        /// Number of instances.
        #[arg(long)]
        count: usize,
        /// Dataset seed; instance i derives its own stream from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output instance file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one method over an instance file; writes <out>.json and <out>.csv.
    Solve {
        #[arg(long)]
        instances: PathBuf,
        /// solver:kK | ensemble | ensemble:mM | nn | nn_all | farthest |
        /// beam:wW | christofides | exact
        #[arg(long)]
        method: String,
        /// Solver config file (key=value); defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output path prefix for the report.
        #[arg(long)]
        out: PathBuf,
        /// Gap column source: auto | off | ref:<report.json>.
        #[arg(long, default_value = "auto")]
        gaps: String,
        /// Zero out wall-time fields so reports are bitwise reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Grid-search (tau, gamma) on a validation file; best cell by mean length.
    Sweep {
        #[arg(long)]
        instances: PathBuf,
        /// Grid file with `tau = ...` and `gamma = ...` lists.
        #[arg(long)]
        grid: PathBuf,
        /// Base solver config the grid cells override.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Solver method to sweep (solver:kK or ensemble[:mM]).
        #[arg(long, default_value = "solver:k1")]
        method: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mean decoded length vs number of coprime shifts; writes a CSV.
    ShiftCurve {
        #[arg(long)]
        instances: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Histograms, five-number summaries and ECDFs from paired reports.
    Distribution {
        /// Output path prefix for <prefix>_{hist,summary,cdf}.csv.
        #[arg(long)]
        out: PathBuf,
        /// Histogram bin count.
        #[arg(long, default_value_t = 30)]
        bins: usize,
        /// Report JSON files produced by `solve`.
        #[arg(required = true)]
        reports: Vec<PathBuf>,
    },
}

fn parse<T: std::str::FromStr<Err = String>>(what: &str, s: &str) -> CliResult<T> {
    s.parse::<T>().map_err(|e| CliError::usage(format!("invalid {what}: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(CliError::usage("workers must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::runtime(format!("thread pool: {e}")))?;
    }
    match cli.cmd {
        Cmd::Generate { n, count, seed, out } => cmd_generate(n, count, seed, &out),
        Cmd::Solve { instances, method, config, seed, out, gaps, no_timing } => {
            let opts = SolveOpts {
                instances,
                method: parse::<Method>("method", &method)?,
                config,
                seed,
                out,
                gaps: parse::<GapsMode>("gaps mode", &gaps)?,
                timing: !no_timing,
            };
            cmd_solve(&opts).map(|_| ())
        }
        Cmd::Sweep { instances, grid, config, method, seed, out } => {
            let opts = SweepOpts {
                instances,
                grid,
                config,
                method: parse::<Method>("method", &method)?,
                seed,
                out,
            };
            cmd_sweep(&opts).map(|_| ())
        }
        Cmd::ShiftCurve { instances, config, seed, out } => {
            cmd_shift_curve(&ShiftCurveOpts { instances, config, seed, out }).map(|_| ())
        }
        Cmd::Distribution { out, bins, reports } => cmd_distribution(&reports, &out, bins),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.usage { 2 } else { 1 })
        }
    }
}
