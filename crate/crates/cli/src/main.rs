mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nonclassical::error::Error;

#[derive(Parser, Debug)]
#[command(name = "ncpoly", version, about = "Exact computations with non-classical polynomials over F_p^n")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Field characteristic for text input and suite grids.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Dimension for text input and suite grids.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Degree: the norm order for `norm`, the search degree for `explore`,
    /// the grid degree for `verify`.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Input file, or `-` for stdin.
    #[arg(long, global = true, default_value = "-")]
    pub input: String,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Operation budget for exhaustive computations.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Trial count for `verify`.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Values of a polynomial, everywhere or at one point.
    Eval {
        /// Point digits, comma separated.
        #[arg(long, value_delimiter = ',')]
        at: Option<Vec<u32>>,
    },
    /// Additive derivative `P(x + h) - P(x)`.
    Derive {
        #[arg(long, value_delimiter = ',', required = true)]
        h: Vec<u32>,
    },
    /// Degree from the canonical form and from iterated derivatives.
    Degree,
    /// Canonical form of a value table `{"p","n","exp","table"}`.
    Interpolate,
    /// A polynomial `R` with `pR = P`.
    Root,
    /// `p * P`.
    Mulp,
    /// `||f||_{U^d}` of a function or of the phase `e(P)`.
    Norm,
    /// Exact bias of `d^{s+1} P` and the analytic rank.
    Arank {
        #[arg(long)]
        s: usize,
    },
    /// Exact bias of a classical symmetric multilinear form.
    Bias,
    /// Checks `{"target", "s", "witness"}`.
    WitnessCheck,
    /// Best correlated polynomial of degree at most `--degree`.
    Explore,
    /// Conditional expectation of `{"function", "factors"}`.
    Decompose,
    /// Weighted degree of a weighted polynomial.
    Wdegree,
    /// Root of a weighted polynomial.
    Wroot,
    /// Cube-group membership of `{"group", "cube"}`.
    CubeCheck,
    /// Polynomial-map test of `{"source", "target", "phi"}`.
    PolymapCheck,
    /// Equidistribution of values, a factor, or multilinear forms.
    Equidist,
    /// Runs a named verification suite.
    Verify { suite: String },
}

/// A command's result and whether any check in it failed.
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub passed: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Budget(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::CapExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Eval { at } => commands::eval(g, at.as_deref()),
        Command::Derive { h } => commands::derive(g, h),
        Command::Degree => commands::degree(g),
        Command::Interpolate => commands::interpolate(g),
        Command::Root => commands::root(g),
        Command::Mulp => commands::mulp(g),
        Command::Norm => commands::norm(g),
        Command::Arank { s } => commands::arank(g, *s),
        Command::Bias => commands::bias(g),
        Command::WitnessCheck => commands::witness_check(g),
        Command::Explore => commands::explore(g),
        Command::Decompose => commands::decompose(g),
        Command::Wdegree => commands::wdegree(g),
        Command::Wroot => commands::wroot(g),
        Command::CubeCheck => commands::cube_check(g),
        Command::PolymapCheck => commands::polymap_check(g),
        Command::Equidist => commands::equidist(g),
        Command::Verify { suite } => commands::verify(g, suite),
    }
}

fn emit(g: &Global, outcome: &Outcome) -> Result<(), CliError> {
    let mut body = if g.json {
        serde_json::to_string_pretty(&outcome.json).map_err(|e| CliError::Io(e.to_string()))?
    } else {
        outcome.text.trim_end().to_string()
    };
    body.push('\n');
    match &g.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|outcome| emit(&cli.global, &outcome).map(|_| outcome.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Usage(msg)) | Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
