//! Command-line front end: exact, asymptotic, and Monte Carlo failure
//! probabilities of the three nearly-balanced-vs-nearly-constant deciders,
//! interrogation error-count distributions, crossover solving, parameter
//! sweeps, and a built-in validation suite.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 usage error.

mod config;
mod point;
mod rows;
mod sweep;
mod validate;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

use config::ConfigFile;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invariant(String),
}

impl From<promiselab::Error> for CliError {
    fn from(e: promiselab::Error) -> Self {
        match e {
            promiselab::Error::InvalidParameter(_)
            | promiselab::Error::OutsideApproximationDomain(_) => CliError::Usage(e.to_string()),
            promiselab::Error::InvariantViolation(_) | promiselab::Error::NoBracket { .. } => {
                CliError::Invariant(e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Dj,
    Classical,
    Wvd,
    All,
}

impl Algo {
    /// Concrete algorithms selected, in output (alphabetical) order.
    pub fn selected(self) -> Vec<Algo> {
        match self {
            Algo::All => vec![Algo::Classical, Algo::Dj, Algo::Wvd],
            one => vec![one],
        }
    }
}

impl std::str::FromStr for Algo {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Algo as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    With,
    Without,
}

impl std::str::FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Model as ValueEnum>::from_str(s, true)
    }
}

impl Model {
    pub fn sampling(self) -> promiselab::SamplingModel {
        match self {
            Model::With => promiselab::SamplingModel::WithReplacement,
            Model::Without => promiselab::SamplingModel::WithoutReplacement,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Asymptotic,
    Mc,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Mode as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pair {
    DjClassical,
    DjWvd,
}

/// Flags shared by every computing subcommand; any of them may instead be
/// supplied through `--config` (a `key = value` file; flags win).
#[derive(Debug, Args, Default, Clone)]
pub struct Common {
    /// Number of oracle input bits (N = 2^n)
    #[arg(long)]
    n: Option<u32>,
    /// Number of flipped bits breaking the promise
    #[arg(long)]
    y: Option<u64>,
    /// Weakening degree u = y/N (alternative to --y; y = round(u N))
    #[arg(long)]
    u: Option<f64>,
    /// Query budget(s); comma-separated lists are accepted where a sweep
    /// over k makes sense
    #[arg(long, value_delimiter = ',')]
    k: Vec<u64>,
    /// Prior probability that the oracle is nearly balanced
    #[arg(long)]
    p: Option<f64>,
    /// Algorithm selection
    #[arg(long)]
    algo: Option<Algo>,
    /// Classical sampling model (with/without replacement)
    #[arg(long)]
    model: Option<Model>,
    /// Monte Carlo trial count
    #[arg(long)]
    trials: Option<u64>,
    /// Base RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (CSV); stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Configuration file with key = value lines
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    pub fn config_file(&self) -> Result<ConfigFile, CliError> {
        match &self.config {
            Some(path) => ConfigFile::load(path),
            None => Ok(ConfigFile::default()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "promiselab",
    about = "Failure probabilities of balanced-vs-constant deciders under a weakened promise",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact failure probabilities at one parameter point
    Exact(Common),
    /// Large-k ln-failure approximations at one weakening
    Asymptotic(Common),
    /// Monte Carlo failure estimates with Wilson 95% intervals
    Mc {
        #[command(flatten)]
        common: Common,
        /// Fix the interrogation error count at its mean instead of
        /// sampling it
        #[arg(long)]
        fixed_m: bool,
    },
    /// Exact interrogation error-count distribution P(t | N, k)
    WvdDist {
        #[command(flatten)]
        common: Common,
        /// Compute via the full statevector oracle (N <= 16)
        #[arg(long)]
        statevector: bool,
    },
    /// Sweep the weakening u and emit one CSV row per grid point
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Lower end of the u grid
        #[arg(long)]
        u_min: Option<f64>,
        /// Upper end of the u grid
        #[arg(long)]
        u_max: Option<f64>,
        /// Number of grid points (>= 2)
        #[arg(long)]
        u_steps: Option<u64>,
        /// Evaluation modes to include
        #[arg(long, value_delimiter = ',')]
        mode: Vec<Mode>,
    },
    /// Solve for the weakening where two algorithms decay equally fast
    Crossover {
        /// Which comparison to solve; both when omitted
        #[arg(long)]
        pair: Option<Pair>,
    },
    /// Run the built-in invariant suite
    Validate {
        /// Also report which checks fail at a tightened 1e-12 tolerance
        #[arg(long)]
        strict: bool,
    },
}

/// Resolve a full problem instance (needs n, plus y or u).
pub fn resolve_instance(
    n: Option<u32>,
    y: Option<u64>,
    u: Option<f64>,
    p: f64,
) -> Result<promiselab::ProblemInstance, CliError> {
    let n = n.ok_or_else(|| CliError::Usage("--n is required for this command".into()))?;
    let big_n = 1u64 << n;
    let y = match (y, u) {
        (Some(y), _) => y,
        (None, Some(u)) => {
            if !(0.0..=0.5).contains(&u) {
                return Err(CliError::Usage(format!("--u must be in [0, 1/2], got {u}")));
            }
            (u * big_n as f64).round() as u64
        }
        (None, None) => {
            return Err(CliError::Usage("one of --y or --u is required".into()));
        }
    };
    Ok(promiselab::ProblemInstance::new(n, y, p)?)
}

/// Write rows as CSV to `out` or stdout.
pub fn emit_rows(rows: &[rows::Row], out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path).map_err(|e| {
                CliError::Usage(format!("cannot write {}: {e}", path.display()))
            })?;
            rows::write_rows(&mut file, rows)
                .map_err(|e| CliError::Usage(format!("write failed: {e}")))
        }
        None => rows::write_rows(&mut std::io::stdout().lock(), rows)
            .map_err(|e| CliError::Usage(format!("write failed: {e}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exact(common) => point::run_point(&common, Mode::Exact, false),
        Command::Asymptotic(common) => point::run_point(&common, Mode::Asymptotic, false),
        Command::Mc { common, fixed_m } => point::run_point(&common, Mode::Mc, fixed_m),
        Command::WvdDist {
            common,
            statevector,
        } => point::run_wvd_dist(&common, statevector),
        Command::Sweep {
            common,
            u_min,
            u_max,
            u_steps,
            mode,
        } => sweep::run_sweep(&common, u_min, u_max, u_steps, &mode),
        Command::Crossover { pair } => {
            let pairs = match pair {
                Some(Pair::DjClassical) => vec![Pair::DjClassical],
                Some(Pair::DjWvd) => vec![Pair::DjWvd],
                None => vec![Pair::DjClassical, Pair::DjWvd],
            };
            for pair in pairs {
                let result = match pair {
                    Pair::DjClassical => promiselab::crossover::solve_crossover_dj_classical()?,
                    Pair::DjWvd => promiselab::crossover::solve_crossover_dj_wvd()?,
                };
                println!("pair: {}", result.pair.label());
                println!("u_star: {}", result.u_star);
                println!("residual: {:e}", result.residual);
                println!("bracket: {} {}", result.bracket.0, result.bracket.1);
            }
            Ok(())
        }
        Command::Validate { strict } => validate::run_validate(strict),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            std::process::exit(1);
        }
    }
}
