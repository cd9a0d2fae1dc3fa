//! `coordlab`: graph generation, equilibrium analysis, learning dynamics and
//! Gibbs sweeps from the command line.

mod sweep;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use coordlab::dynamics::{
    beta_bound_closed_form, gibbs_lower_bound, simulate, GibbsModel, InitialProfile, LllConfig,
};
use coordlab::equilibrium::enumerate_maximizers;
use coordlab::{Error, GameSpec, Graph};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "coordlab",
    version,
    about = "Coordination games on regular graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graph construction.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Nash equilibria and potential maximizers by exhaustive search.
    Equilibria(EquilibriaArgs),
    /// Exact optimal-profile mass, lower bound and expected potential over a (K, beta) grid.
    Sweep(sweep::SweepArgs),
    /// Smallest beta reaching mass 1 - delta, next to the closed-form bound.
    BetaMin(BetaMinArgs),
    /// Run log-linear learning.
    Simulate(SimulateArgs),
    /// Evaluate the lower bound on the optimal-profile mass.
    Bound(BoundArgs),
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Write the canonical circulant graph of degree K on N vertices.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GameArgs {
    /// Graph JSON file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
}

#[derive(Args)]
struct EquilibriaArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BetaMinArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    steps: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    replicas: usize,
    /// Steps discarded before recording; defaults to max(steps/100, 10000), at most steps/2.
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Graph JSON file; alternatively give --n and --k.
    #[arg(long, conflicts_with_all = ["n", "k"])]
    graph: Option<PathBuf>,
    #[arg(long, requires = "k")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    k: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleDegree { .. }
            | Error::DegreeSaturated { .. }
            | Error::InvalidGraph(_)
            | Error::Disconnected => 2,
            Error::TooLarge { .. } => 3,
            Error::DegenerateTheta { .. } => 4,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn read_graph(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(Graph::from_json(&text)?)
}

fn game(args: &GameArgs) -> CliResult<GameSpec> {
    Ok(GameSpec::new(
        Arc::new(read_graph(&args.graph)?),
        args.theta,
    )?)
}

fn write_text(path: &Path, text: &str) -> CliResult {
    fs::write(path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    match out {
        Some(path) => write_text(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn graph_gen(n: usize, k: usize, out: &Path) -> CliResult {
    let g = Graph::circulant(n, k)?;
    let spectrum = g.spectrum()?;
    write_text(out, &g.to_json())?;
    println!("n = {n}, k = {k}, edges = {}", g.edge_count());
    println!(
        "lambda_1 = {}, multiplicity = {}",
        spectrum.largest(),
        spectrum.multiplicity_of_top
    );
    Ok(())
}

#[derive(Serialize)]
struct EquilibriaReport {
    #[serde(flatten)]
    report: coordlab::equilibrium::EquilibriumReport,
    maximizers_are_nash: bool,
}

fn equilibria(args: &EquilibriaArgs) -> CliResult {
    let spec = game(&args.game)?;
    let report = enumerate_maximizers(&spec)?;
    let maximizers_are_nash = report.maximizers_are_nash();
    emit_json(
        &EquilibriaReport {
            report,
            maximizers_are_nash,
        },
        args.out.as_deref(),
    )
}

#[derive(Serialize)]
struct BetaMinReport {
    n: usize,
    k: usize,
    theta: f64,
    delta: f64,
    beta_min: f64,
    closed_form_bound: f64,
}

fn beta_min(args: &BetaMinArgs) -> CliResult {
    let spec = game(&args.game)?;
    let (n, k, theta) = (spec.n(), spec.k(), spec.theta());
    let bound = beta_bound_closed_form(n, k, theta, args.delta)?;
    let value = GibbsModel::new(spec)?.beta_min(args.delta)?;
    println!("beta_min = {value}");
    println!("bound    = {bound}");
    if let Some(out) = &args.out {
        let report = BetaMinReport {
            n,
            k,
            theta,
            delta: args.delta,
            beta_min: value,
            closed_form_bound: bound,
        };
        emit_json(&report, Some(out))?;
    }
    if bound < value {
        return Err(Failure::usage(format!(
            "closed-form bound {bound} is below beta_min {value}"
        )));
    }
    Ok(())
}

fn run_simulation(args: &SimulateArgs) -> CliResult {
    let spec = game(&args.game)?;
    let mut cfg = LllConfig::new(args.beta, args.steps, args.seed)
        .with_replicas(args.replicas)
        .with_initial(InitialProfile::UniformRandom);
    if let Some(b) = args.burn_in {
        cfg = cfg.with_burn_in(b);
    }
    let stats = simulate(&spec, &cfg)?;
    emit_json(&stats, args.out.as_deref())
}

fn bound(args: &BoundArgs) -> CliResult {
    let (n, k) = match (&args.graph, args.n, args.k) {
        (Some(path), _, _) => {
            let g = read_graph(path)?;
            (g.n(), g.k())
        }
        (None, Some(n), Some(k)) => {
            coordlab::graph::check_feasible(n, k)?;
            (n, k)
        }
        _ => return Err(Failure::usage("give --graph or both --n and --k")),
    };
    if args.beta.is_none() && args.delta.is_none() {
        return Err(Failure::usage("give --beta, --delta or both"));
    }
    if let Some(beta) = args.beta {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Failure::usage(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        println!(
            "lower_bound = {}",
            gibbs_lower_bound(n, k, args.theta, beta)
        );
    }
    if let Some(delta) = args.delta {
        println!(
            "beta_bound = {}",
            beta_bound_closed_form(n, k, args.theta, delta)?
        );
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Graph(GraphCommand::Gen { n, k, out }) => graph_gen(n, k, &out),
        Command::Equilibria(args) => equilibria(&args),
        Command::Sweep(args) => sweep::run(&args),
        Command::BetaMin(args) => beta_min(&args),
        Command::Simulate(args) => run_simulation(&args),
        Command::Bound(args) => bound(&args),
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
    match run(cli) {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
