use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mosar::annealer::{Algorithm, MoveConfig, Schedule};
use mosar::geometry::ExtentMode;
use mosar::harness::{self, MetricKind, RunSpec, SweepConfig};
use mosar::metrics;
use mosar::problems::ProblemKind;

#[derive(Parser)]
#[command(name = "mosar", version, about = "Constrained multi-objective simulated annealing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one annealing run and write its result file.
    Solve(SolveArgs),
    /// Sweep the configuration problem over side lengths, algorithms and seeds.
    Sweep(SweepArgs),
    /// Compute metrics over stored result files.
    Metrics(MetricsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Srn,
    Tnk,
    Config,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Amosa,
    Mosar1,
    Mosar2,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Amosa => Algorithm::Amosa,
            AlgoArg::Mosar1 => Algorithm::MosarV1,
            AlgoArg::Mosar2 => Algorithm::MosarV2,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum EnvelopeArg {
    #[default]
    Exact,
    ClosedForm,
}

impl From<EnvelopeArg> for ExtentMode {
    fn from(e: EnvelopeArg) -> Self {
        match e {
            EnvelopeArg::Exact => ExtentMode::Exact,
            EnvelopeArg::ClosedForm => ExtentMode::ClosedForm,
        }
    }
}

#[derive(Args)]
struct ScheduleArgs {
    /// Starting temperature.
    #[arg(long)]
    tmax: Option<f64>,
    /// Final temperature.
    #[arg(long)]
    tmin: Option<f64>,
    /// Geometric cooling factor.
    #[arg(long)]
    alpha: Option<f64>,
    /// Iterations per temperature level.
    #[arg(long)]
    iters: Option<usize>,
}

impl ScheduleArgs {
    fn apply(&self, base: Schedule) -> Result<Schedule, String> {
        Schedule::new(
            self.tmax.unwrap_or(base.t_max),
            self.tmin.unwrap_or(base.t_min),
            self.alpha.unwrap_or(base.alpha),
            self.iters.unwrap_or(base.iters_per_temp),
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct MoveArgs {
    /// Laplace scale for positional moves.
    #[arg(long)]
    translation_scale: Option<f64>,
    /// Laplace scale for angular moves, in degrees.
    #[arg(long)]
    rotation_scale: Option<f64>,
    /// Laplace scale for benchmark moves as a fraction of the variable range.
    #[arg(long)]
    benchmark_fraction: Option<f64>,
}

impl MoveArgs {
    fn apply(&self, base: MoveConfig) -> Result<MoveConfig, String> {
        let m = MoveConfig {
            translation_scale: self.translation_scale.unwrap_or(base.translation_scale),
            rotation_scale: self.rotation_scale.unwrap_or(base.rotation_scale),
            benchmark_scale_fraction: self.benchmark_fraction.unwrap_or(base.benchmark_scale_fraction),
            ..base
        };
        m.validate().map_err(|e| e.to_string())?;
        Ok(m)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    problem: ProblemArg,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long)]
    seed: u64,
    /// Cube side length; required for the config problem.
    #[arg(long)]
    sl: Option<f64>,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    moves: MoveArgs,
    #[arg(long, value_enum, default_value = "exact")]
    envelope: EnvelopeArg,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated side lengths.
    #[arg(long, value_delimiter = ',')]
    sl_grid: Option<Vec<f64>>,
    /// Inclusive seed range `N..M`.
    #[arg(long, default_value = "1..10")]
    seeds: String,
    /// Comma-separated algorithm names.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "amosa,mosar1,mosar2")]
    algos: Vec<AlgoArg>,
    /// Sweep 9.4 down to 8.2 in steps of 0.1.
    #[arg(long, conflicts_with = "sl_grid")]
    full_grid: bool,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    moves: MoveArgs,
    #[arg(long, value_enum, default_value = "exact")]
    envelope: EnvelopeArg,
    #[arg(long, default_value = "sweep-out")]
    out: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    /// Glob selecting result files.
    #[arg(long)]
    inputs: String,
    /// Comma-separated subset of N, IGD, HV, C, S_m, P.
    #[arg(long, value_delimiter = ',', default_value = "N,S_m")]
    metrics: Vec<String>,
    /// Glob selecting the second sets for coverage.
    #[arg(long)]
    against: Option<String>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<mosar::Error> for Failure {
    fn from(e: mosar::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("seed range `{s}` must look like N..M"))?;
    let a: u64 = a.trim().parse().map_err(|_| format!("bad seed `{a}`"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad seed `{b}`"))?;
    if a > b {
        return Err(format!("empty seed range `{s}`"));
    }
    Ok((a..=b).collect())
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let problem = match args.problem {
        ProblemArg::Srn => ProblemKind::Srn,
        ProblemArg::Tnk => ProblemKind::Tnk,
        ProblemArg::Config => ProblemKind::Config,
    };
    if problem == ProblemKind::Config && !args.sl.is_some_and(|s| s > 0.0) {
        return Err(Failure::Usage("--sl with a positive value is required for --problem config".into()));
    }
    let mut spec = RunSpec::new(problem, args.sl, args.algo.into(), args.seed);
    spec.envelope = args.envelope.into();
    spec.run.schedule = args.schedule.apply(spec.run.schedule).map_err(Failure::Usage)?;
    spec.run.moves = args.moves.apply(spec.run.moves).map_err(Failure::Usage)?;
    std::fs::create_dir_all(&args.out).map_err(|e| Failure::Runtime(format!("{}: {e}", args.out.display())))?;
    let result = harness::solve(&spec)?;
    let path = args.out.join(spec.file_name());
    result.write(&path)?;
    println!("{}", harness::describe(&result));
    println!("wrote {}", path.display());
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let grid = if args.full_grid {
        harness::full_sl_grid()
    } else {
        args.sl_grid.unwrap_or_else(|| harness::DEFAULT_SL_GRID.to_vec())
    };
    let seeds = parse_seeds(&args.seeds).map_err(Failure::Usage)?;
    let algorithms = args.algos.iter().map(|&a| a.into()).collect();
    let mut config = SweepConfig::new(grid, seeds, algorithms);
    config.schedule = args.schedule.apply(Schedule::CONFIG).map_err(Failure::Usage)?;
    config.moves = args.moves.apply(config.moves).map_err(Failure::Usage)?;
    config.envelope = args.envelope.into();
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let output = harness::run_sweep(&config, &args.out)?;
    for path in &output.table_files {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
        println!("{text}");
    }
    println!("wrote {} run files to {}", output.run_files.len(), args.out.display());
    Ok(())
}

fn metrics_cmd(args: MetricsArgs) -> Result<(), Failure> {
    let wanted = args
        .metrics
        .iter()
        .map(|m| MetricKind::from_name(m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let inputs = harness::load_results(&args.inputs)?;
    if inputs.is_empty() {
        return Err(Failure::Runtime(format!("no result files match `{}`", args.inputs)));
    }
    let against = match &args.against {
        Some(g) => harness::load_results(g)?,
        None => Vec::new(),
    };
    let report = harness::metrics_report(&inputs, &against, &wanted, &metrics::default_cache_dir())?;
    print!("{report}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Metrics(a) => metrics_cmd(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
