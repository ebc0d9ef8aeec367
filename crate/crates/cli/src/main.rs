use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coinwalk_cli::{emit, parse_spec, run_experiment, CliError, Format, Kind, RunOptions, EXIT_OK, EXIT_PARTIAL};

#[derive(Parser)]
#[command(name = "coinwalk", version, about = "Coincidence-time experiments for random walkers on graphs")]
struct Cli {
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, env = "COINWALK_JOBS")]
    jobs: Option<usize>,
    /// Record per-row wall time (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graph observables and closed-form moments.
    Analyze(RunArgs),
    /// Monte Carlo coincidence time against the stationary prediction.
    Simulate(RunArgs),
    /// Degree-sum moments over an ensemble of sampled graphs.
    Ensemble(RunArgs),
    /// n·Σπ² over a power-law parameter grid.
    Sweep(RunArgs),
    /// Closed-form scaling predictions over a grid, without sampling.
    Predict(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Master seed, overriding the spec.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (kind, args) = match cli.command {
        Command::Analyze(a) => (Kind::Analyze, a),
        Command::Simulate(a) => (Kind::Simulate, a),
        Command::Ensemble(a) => (Kind::Ensemble, a),
        Command::Sweep(a) => (Kind::Sweep, a),
        Command::Predict(a) => (Kind::Predict, a),
    };
    let mut spec = parse_spec(&args.spec)?;
    let kind = spec.resolve_kind(Some(kind))?;
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let out = args.out.or_else(|| spec.output.path.as_ref().map(|p| spec.base_dir.join(p)));
    let format = args.format.or(spec.output.format).unwrap_or_default();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs.max(1));
    }
    let pool = pool.build().map_err(|e| CliError::Pool(e.to_string()))?;
    let opts = RunOptions { timing: cli.timing };
    let rows = pool.install(|| run_experiment(&spec, kind, &opts))?;
    emit::emit(&rows, format, out.as_deref())?;

    let failed = rows.iter().filter(|r| r.is_error()).count();
    if failed > 0 {
        log::error!("{failed} of {} runs failed", rows.len());
        return Ok(EXIT_PARTIAL);
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let code = match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("coinwalk: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
