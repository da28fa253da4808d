mod combi;
mod geo;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ramsey_core::colorsearch::{Budget, SearchConfig};

use report::{Outcome, RunReport};

pub const EXIT_BAD_COLORING: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

#[derive(Parser, Debug)]
#[command(name = "ramsey", version, about = "Echelon factorizations, dual-Ramsey colouring search and exact polyhedral geometry")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Shorthand for `--format pretty`.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for randomised steps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search node budget.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub max_nodes: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true, default_value_t = 60.0)]
    pub max_seconds: f64,
    /// Colouring-search workers.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

impl Global {
    pub fn search_config(&self) -> SearchConfig {
        SearchConfig { budget: Budget { max_nodes: self.max_nodes, max_seconds: self.max_seconds }, jobs: self.jobs.max(1) }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split a full-column-rank matrix into its RCEF and τ(A).
    Decompose(combi::MatrixArgs),
    /// Two-sided factorisation A = A0·Γ·A1ᵗ of a square matrix.
    Tau2(combi::MatrixArgs),
    /// The permutation making a Boolean matrix order-preserving.
    Pi(combi::PiArgs),
    /// Matrix of a rigid surjection onto F_p^k in antilex order.
    Phi(combi::PhiArgs),
    /// Decide whether an instance admits a bad colouring.
    Verify(combi::VerifyArgs),
    /// Least n with no bad colouring.
    MinN(combi::MinNArgs),
    /// Polyhedral normed-space computations.
    #[command(subcommand)]
    Geo(geo::GeoCommand),
    /// Lipschitz-free space norms over a finite metric.
    Free(geo::FreeArgs),
    /// Explicit Ramsey-number bounds.
    #[command(subcommand)]
    Bound(geo::BoundCommand),
    /// Isometric embeddings between finite metrics and their free-space extensions.
    Emb(geo::EmbArgs),
}

fn run(command: &Command, global: &Global) -> Result<Outcome, CliError> {
    match command {
        Command::Decompose(a) => combi::decompose(a),
        Command::Tau2(a) => combi::tau2(a),
        Command::Pi(a) => combi::pi(a),
        Command::Phi(a) => combi::phi(a),
        Command::Verify(a) => combi::verify(a, global),
        Command::MinN(a) => combi::min_n(a, global),
        Command::Geo(g) => geo::geo(g, global),
        Command::Free(a) => geo::free(a),
        Command::Bound(b) => geo::bound(b),
        Command::Emb(a) => geo::emb(a),
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Decompose(_) => "decompose".into(),
        Command::Tau2(_) => "tau2".into(),
        Command::Pi(_) => "pi".into(),
        Command::Phi(_) => "phi".into(),
        Command::Verify(a) => format!("verify {}", a.family.name()),
        Command::MinN(a) => format!("min-n {}", a.family.name()),
        Command::Geo(g) => format!("geo {}", g.name()),
        Command::Free(_) => "free".into(),
        Command::Bound(b) => format!("bound {}", b.name()),
        Command::Emb(_) => "emb".into(),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    match run(&cli.command, &cli.global) {
        Ok(outcome) => {
            let code = outcome.exit;
            let report = RunReport::new(command_name(&cli.command), argv[1..].to_vec(), outcome, start.elapsed().as_secs_f64());
            let pretty = cli.global.pretty || cli.global.format == Format::Pretty;
            let text = if pretty { report.pretty() } else { report.json() };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Budget(_) => EXIT_BUDGET,
            })
        }
    }
}
