//! `decolab` command-line front end.

mod output;

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use decolab::analysis::{
    check_bounds, contractivity_suite, convexity_suite, f_series, kraus_suite, min_worthless_depth,
    noise_action_suite, practically_worthless_with, theta_and_threshold, ProbeSpec, SuiteOutcome, NOISE_ACTION_RATES,
};
use decolab::circuit::{parse_circuit, random_circuit, run_noisy_with, serialize_circuit, NoiseSchedule};
use decolab::linalg::MAX_QUBITS;
use decolab::report::{
    bound_table, distance_table, fmt_real, recursion_table, sweep_table, trajectory_states, trajectory_table,
    SweepPoint,
};
use decolab::{Error, Execution};

use output::{emit, render, Format};

const WIDTH_CAP_VAR: &str = "DECOLAB_MAX_QUBITS";
const DEFAULT_WIDTH_CAP: usize = 10;

#[derive(Parser)]
#[command(name = "decolab", version, about = "Noisy density-matrix circuit simulator and distance-bound analysis")]
struct Cli {
    /// Worker threads for batch work (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit with noise and report distances level by level
    Simulate(SimulateArgs),
    /// Tabulate the bound recursion for one fan-in and rate
    Bound(BoundArgs),
    /// Smallest collapsing depth over a grid of fan-ins, rates and widths
    Sweep(SweepArgs),
    /// Run the built-in seeded self-checks
    Check(CheckArgs),
    /// Write a seeded random circuit in the text format
    Random(RandomArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (default: stdout)
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    eta: f64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// basis, pair:i,j or random:N (default: basis up to 6 qubits, else random:32)
    #[arg(long)]
    probes: Option<ProbeSpec>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also depolarize the input before the first layer
    #[arg(long)]
    noise_before_first: bool,
    /// Also depolarize the final level
    #[arg(long)]
    noise_after_last: bool,
    /// Per-level widths of the first probe's run, as CSV
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Full per-level states of the first probe's run
    #[arg(long)]
    states: Option<PathBuf>,
    /// Worst step of the level-to-level inequality per (level, n)
    #[arg(long)]
    recursion: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    eta: f64,
    #[arg(long, default_value_t = 10)]
    depth: usize,
    /// Largest subset size tabulated
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    eta: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    NoiseAction,
    Contractivity,
    Convexity,
    Kraus,
    All,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Register size for the noise-action suite
    #[arg(long, default_value_t = 3)]
    qubits: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    width: usize,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Cap(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn check_eta(eta: f64) -> Outcome {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--eta must lie in [0, 1], got {eta}")))
    }
}

fn check_eps(eps: f64) -> Outcome {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--eps must lie in (0, 1], got {eps}")))
    }
}

fn width_cap() -> Result<usize, Failure> {
    match env::var(WIDTH_CAP_VAR) {
        Err(_) => Ok(DEFAULT_WIDTH_CAP),
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n <= MAX_QUBITS => Ok(n),
            _ => Err(Failure::Usage(format!("{WIDTH_CAP_VAR} must be an integer in 0..={MAX_QUBITS}, got `{raw}`"))),
        },
    }
}

fn check_width(width: usize) -> Outcome {
    let cap = width_cap()?;
    if width > cap {
        return Err(Failure::Cap(format!("width {width} exceeds the cap of {cap} qubits (set {WIDTH_CAP_VAR})")));
    }
    Ok(())
}

/// Summary lines go to stdout when the table went to a file, else stderr so
/// stdout stays a clean table.
fn summary(to_file: bool, line: &str) {
    if to_file {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn write_table(table: &decolab::report::Table, out: &OutputArgs) -> Outcome {
    let text = render(table, out.format);
    emit(&text, out.output.as_deref()).map_err(|e| match &out.output {
        Some(p) => io_failure(p, e),
        None => Failure::Usage(e.to_string()),
    })
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn simulate(args: &SimulateArgs, mode: Execution) -> Outcome {
    check_eta(args.eta)?;
    check_eps(args.eps)?;
    let text = fs::read_to_string(&args.circuit).map_err(|e| io_failure(&args.circuit, e))?;
    let q = parse_circuit(&text)?;
    check_width(q.width())?;
    let schedule = NoiseSchedule { before_first: args.noise_before_first, after_last: args.noise_after_last };
    let spec = args.probes.clone().unwrap_or_else(|| ProbeSpec::default_for(q.input_width()));
    let probes = spec.states(q.input_width(), args.seed)?;

    let check = check_bounds(&q, args.eta, &probes, schedule, mode)?;
    let verdict = practically_worthless_with(&q, args.eta, args.eps, &probes, schedule, mode)?;
    write_table(&distance_table(&check.report), &args.out)?;
    if let Some(path) = &args.recursion {
        write_file(path, &render(&recursion_table(&check), args.out.format))?;
    }
    if args.trajectory.is_some() || args.states.is_some() {
        let traj = run_noisy_with(&q, args.eta, &probes[0].state, schedule)?;
        if let Some(path) = &args.trajectory {
            write_file(path, &render(&trajectory_table(&traj), args.out.format))?;
        }
        if let Some(path) = &args.states {
            write_file(path, &trajectory_states(&traj))?;
        }
    }
    summary(
        args.out.output.is_some(),
        &format!(
            "probes {} pairs {} min_slack {} counterexamples {} final_max_distance {} practically_worthless {} ({}) eps {}",
            spec,
            check.pairs,
            fmt_real(check.report.min_slack()),
            check.counterexamples,
            fmt_real(verdict.max_distance),
            if verdict.flag { "yes" } else { "no" },
            verdict.certainty,
            fmt_real(args.eps),
        ),
    );
    Ok(())
}

fn bound(args: &BoundArgs) -> Outcome {
    check_eta(args.eta)?;
    let series = f_series(args.k, args.eta, args.depth)?;
    let t = theta_and_threshold(args.k, args.eta)?;
    let sizes: Vec<usize> = (1..=args.n).collect();
    write_table(&bound_table(&series, &sizes), &args.out)?;
    summary(
        args.out.output.is_some(),
        &format!(
            "k {} eta {} theta {} threshold {} {}",
            args.k,
            fmt_real(args.eta),
            fmt_real(t.theta),
            fmt_real(t.threshold),
            if t.above { "above threshold" } else { "at/below threshold" }
        ),
    );
    Ok(())
}

fn sweep(args: &SweepArgs) -> Outcome {
    check_eps(args.eps)?;
    for &eta in &args.eta {
        check_eta(eta)?;
    }
    if let Some(&k) = args.k.iter().find(|&&k| k == 0) {
        return Err(Failure::Usage(format!("--k must be at least 1, got {k}")));
    }
    let grid: Vec<(usize, f64, usize)> = args
        .k
        .iter()
        .flat_map(|&k| args.eta.iter().flat_map(move |&eta| args.n.iter().map(move |&n| (k, eta, n))))
        .collect();
    let points = par_map(&grid, |&(k, eta, n)| {
        min_worthless_depth(k, eta, n, args.eps).map(|depth| SweepPoint { k, eta, n, eps: args.eps, depth })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    write_table(&sweep_table(&points), &args.out)
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

fn check(args: &CheckArgs) -> Outcome {
    let run_all = args.suite == Suite::All;
    let mut outcomes: Vec<SuiteOutcome> = Vec::new();
    if run_all || args.suite == Suite::NoiseAction {
        outcomes.push(noise_action_suite(args.qubits, args.trials, args.seed, &NOISE_ACTION_RATES)?);
    }
    if run_all || args.suite == Suite::Contractivity {
        outcomes.push(contractivity_suite(args.trials, args.seed)?);
    }
    if run_all || args.suite == Suite::Convexity {
        outcomes.push(convexity_suite(args.trials, args.seed)?);
    }
    if run_all || args.suite == Suite::Kraus {
        outcomes.push(kraus_suite());
    }
    for o in &outcomes {
        println!("{o}");
    }
    if outcomes.iter().all(SuiteOutcome::passed) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn random(args: &RandomArgs) -> Outcome {
    check_width(args.width)?;
    let q = random_circuit(args.k, args.width, args.depth, args.seed)?;
    let text = serialize_circuit(&q);
    match &args.output {
        Some(path) => write_file(path, &text),
        None => emit(&text, None).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let mode = if cli.jobs == Some(1) { Execution::Sequential } else { Execution::Parallel };
    match &cli.command {
        Command::Simulate(a) => simulate(a, mode),
        Command::Bound(a) => bound(a),
        Command::Sweep(a) => sweep(a),
        Command::Check(a) => check(a),
        Command::Random(a) => random(a),
    }
}

#[cfg(feature = "parallel")]
fn run(cli: &Cli) -> Outcome {
    match cli.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(cli))
        }
        None => dispatch(cli),
    }
}

#[cfg(not(feature = "parallel"))]
fn run(cli: &Cli) -> Outcome {
    if cli.jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    dispatch(cli)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
