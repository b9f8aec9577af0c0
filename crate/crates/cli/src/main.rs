//! `chainkit` — exact solving and seeded simulation of finite absorbing
//! Markov chains from the command line.
//!
//! Exit codes: 0 success, 1 domain or validation error, 2 usage error.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chainkit::models;
use chainkit::rational::to_f64;
use chainkit::series;
use chainkit::sim;
use chainkit::solve;

use input::{build_model, load_chain, CliError, ModelFlags, ModelKind};
use output::Format;

#[derive(Parser)]
#[command(
    name = "chainkit",
    version,
    about = "Exact solver and reproducible Monte Carlo simulator for finite absorbing Markov chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a chain exactly: absorption probabilities, expected costs, visit counts.
    Solve(SolveArgs),
    /// Estimate the same quantities by seeded simulation, next to the exact values.
    Simulate(SimulateArgs),
    /// Sum the two-position walk's absorption and step series directly.
    Series(SeriesArgs),
    /// Truncated doubling-stakes lottery: exact expectation or a sampled running mean.
    Lottery(LotteryArgs),
    /// Fall frequency of the two-position walker under instant replacement.
    Renewal(RenewalArgs),
    /// Infer a step length from an interval half-width and a mean step count.
    Calibrate(CalibrateArgs),
    /// Print a built-in model, optionally as chainfile text.
    Model(ModelCmdArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Chain file to read; mutually exclusive with --model.
    input: Option<PathBuf>,
    /// Built-in model instead of a file.
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[command(flatten)]
    flags: ModelFlags,
    /// Start state name; defaults to the chain's own start, else the
    /// first transient state.
    #[arg(long)]
    start: Option<String>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    /// Chain file to read; mutually exclusive with --model.
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[command(flatten)]
    flags: ModelFlags,
    #[arg(long)]
    start: Option<String>,
    /// Number of independent trajectories.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Master seed; every result is a pure function of it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-trial step budget.
    #[arg(long, default_value_t = sim::DEFAULT_MAX_STEPS, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Args)]
struct SeriesArgs {
    /// Start position, 1 or 2.
    #[arg(long)]
    start: u32,
    /// Stop once the current term drops below this tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args)]
struct LotteryArgs {
    /// Print the exact truncated expectation and exit.
    #[arg(long)]
    expected: bool,
    /// Maximum number of coin tosses per play.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_tosses: u32,
    /// Number of plays to sample (sampling mode).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    plays: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the running mean every this many plays (0 = ten evenly
    /// spaced lines).
    #[arg(long, default_value_t = 0)]
    every: u64,
}

#[derive(Args)]
struct RenewalArgs {
    /// Total number of steps to walk.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Half-width of the symmetric interval the walker leaves.
    #[arg(long)]
    half_width: f64,
    /// Measured mean number of steps to leave it.
    #[arg(long)]
    mean_steps: f64,
}

#[derive(Args)]
struct ModelCmdArgs {
    /// Which built-in model to construct.
    #[arg(value_enum)]
    kind: ModelKind,
    #[command(flatten)]
    flags: ModelFlags,
    /// Emit the model as chainfile text instead of a summary.
    #[arg(long)]
    emit: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Series(args) => cmd_series(args),
        Command::Lottery(args) => cmd_lottery(args),
        Command::Renewal(args) => cmd_renewal(args),
        Command::Calibrate(args) => cmd_calibrate(args),
        Command::Model(args) => cmd_model(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let loaded = load_chain(
        args.input.as_ref(),
        args.model,
        &args.flags,
        args.start.as_deref(),
    )?;
    let report =
        solve::solve_report(&loaded.chain).map_err(|e| CliError::domain(e.to_string()))?;
    print!(
        "{}",
        output::render_solve(&loaded.chain, &report, loaded.start, &loaded.origin, args.format)
    );
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let loaded = load_chain(
        args.input.as_ref(),
        args.model,
        &args.flags,
        args.start.as_deref(),
    )?;
    let chain = &loaded.chain;
    let stats = sim::run_experiment_with(chain, loaded.start, args.trials, args.seed, args.max_steps)
        .map_err(|e| CliError::domain(e.to_string()))?;

    let exact_absorb = solve::absorption_distribution(chain, loaded.start)
        .map_err(|e| CliError::domain(e.to_string()))?;
    let (exact_steps, exact_cost) = if chain.is_absorbing(loaded.start) {
        (chainkit::rational::zero(), chainkit::rational::zero())
    } else {
        let steps = solve::expected_steps(chain).map_err(|e| CliError::domain(e.to_string()))?;
        let costs = solve::expected_cost(chain).map_err(|e| CliError::domain(e.to_string()))?;
        (steps[loaded.start].clone(), costs[loaded.start].clone())
    };

    let report = output::SimulateReport {
        chain,
        stats: &stats,
        start: loaded.start,
        origin: &loaded.origin,
        exact_absorb: &exact_absorb,
        exact_steps,
        exact_cost,
        max_steps: args.max_steps,
    };
    print!("{}", output::render_simulate(&report, args.format));
    Ok(())
}

fn cmd_series(args: SeriesArgs) -> Result<(), CliError> {
    let sums = series::short_walk_series(args.start, args.tol).map_err(|e| match e {
        series::SeriesError::BadStartPosition(_) => CliError::usage(e.to_string()),
        other => CliError::domain(other.to_string()),
    })?;
    println!("p_right {:.12}", sums.p_right);
    println!("mean_steps {:.12}", sums.mean_steps);
    println!("terms {}", sums.terms_used);
    Ok(())
}

fn cmd_lottery(args: LotteryArgs) -> Result<(), CliError> {
    if args.expected {
        let ev = series::truncated_lottery_ev(args.max_tosses)
            .map_err(|e| CliError::domain(e.to_string()))?;
        println!("{ev}");
        return Ok(());
    }
    let plays = args
        .plays
        .ok_or_else(|| CliError::usage("lottery needs --expected or --plays"))?;
    let running = sim::lottery_running_mean(plays, args.max_tosses, args.seed)
        .map_err(|e| CliError::domain(e.to_string()))?;
    let every = if args.every > 0 {
        args.every
    } else {
        (plays / 10).max(1)
    };
    for &(play, mean) in &running {
        if play.is_multiple_of(every) || play == plays {
            println!("{play}\t{mean:.6}");
        }
    }
    Ok(())
}

fn cmd_renewal(args: RenewalArgs) -> Result<(), CliError> {
    let report = sim::renewal_experiment(args.steps, args.seed)
        .map_err(|e| CliError::domain(e.to_string()))?;
    println!("steps {}", report.total_steps);
    println!("falls {}", report.falls);
    println!("fall_frequency {:.6}", report.fall_frequency);
    println!("mean_gap {:.6}", report.mean_gap);
    Ok(())
}

fn cmd_calibrate(args: CalibrateArgs) -> Result<(), CliError> {
    let step = models::brownian_step_length(args.half_width, args.mean_steps)
        .map_err(|e| CliError::domain(e.to_string()))?;
    println!("{step}");
    Ok(())
}

fn cmd_model(args: ModelCmdArgs) -> Result<(), CliError> {
    let spec = build_model(args.kind, &args.flags)?;
    if args.emit {
        print!("{}", chainkit::chainfile::serialize(&spec));
        return Ok(());
    }
    let chain =
        chainkit::chain::validate(&spec).map_err(|e| CliError::domain(e.to_string()))?;
    let start = chain
        .start()
        .map(|s| chain.name(s).to_string())
        .unwrap_or_else(|| "unset".into());
    println!(
        "{:?}: {} states ({} transient, {} absorbing), start {start}",
        args.kind,
        chain.n_states(),
        chain.n_transient(),
        chain.n_absorbing(),
    );
    if let Some(s) = chain.start().filter(|&s| !chain.is_absorbing(s)) {
        let t = solve::expected_cost(&chain).map_err(|e| CliError::domain(e.to_string()))?;
        println!("expected cost from start: {} ({})", t[s], to_f64(&t[s]));
    }
    Ok(())
}
