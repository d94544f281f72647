use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stackelberg_core::{Error, InstanceFile, Model};

mod bench;
mod generate;
mod solve;
mod verify;

/// Leader pricing against a Greedy subset sum follower.
#[derive(Debug, Parser)]
#[command(name = "stackelberg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute an optimal leader assignment and print a JSON report.
    Solve(SolveArgs),
    /// Replay an assignment through the Greedy follower.
    Verify(VerifyArgs),
    /// Write a random or Partition-derived instance file.
    Generate(GenerateArgs),
    /// Compare cell-update counts of the two constraint solvers.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Dp,
    DpBatched,
    Oracle,
    ClosedForm,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::DpBatched => "dp-batched",
            Algorithm::Oracle => "oracle",
            Algorithm::ClosedForm => "closed-form",
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    file: PathBuf,
    /// Override the model named in the file.
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    /// Defaults to dp for the discrete models and closed-form otherwise.
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    file: PathBuf,
    assignment: PathBuf,
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    /// Expected leader payoff as `base,eps_coeff`.
    #[arg(long, allow_hyphen_values = true)]
    claim: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(
        long,
        num_args = 4,
        value_names = ["LEADER_ITEMS", "FOLLOWER_ITEMS", "MAX_WEIGHT", "CAPACITY"],
        conflicts_with = "from_partition",
        requires = "seed"
    )]
    random: Option<Vec<i64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// File holding the Partition numbers, e.g. `[1, 2, 3]`.
    #[arg(long, requires = "theorem", required_unless_present = "random")]
    from_partition: Option<PathBuf>,
    /// 2: objective gadget, 4: constraint gadget.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
    theorem: Option<u8>,
    /// Big item of the objective gadget; defaults to 10·b + 1.
    #[arg(long = "M")]
    big_m: Option<i64>,
    /// Scale of the constraint gadget.
    #[arg(long, default_value_t = 2)]
    scale: i64,
    /// Model of a random instance.
    #[arg(long, value_parser = parse_model, conflicts_with = "from_partition")]
    model: Option<Model>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_parser = parse_model, default_value = "constraint")]
    model: Model,
    /// Comma-separated leader item counts.
    #[arg(long, default_value = "64,144,256,400")]
    sizes: String,
    #[arg(long, default_value_t = 1000)]
    capacity: i64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    follower_items: usize,
    #[arg(long, default_value_t = 60)]
    max_weight: i64,
    /// Print JSON rows instead of a table.
    #[arg(long)]
    json: bool,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A message and the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn incompatible(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::WrongModel { .. } => 3,
            Error::InstanceTooLargeForOracle { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

pub fn read_instance(path: &Path, model: Option<Model>) -> Result<InstanceFile, Failure> {
    let text = read_text(path)?;
    let mut file = InstanceFile::from_json(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    if let Some(m) = model {
        file.instance.model = m;
    }
    Ok(file)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve(args) => solve::run(&args).map(|()| 0),
        Command::Verify(args) => verify::run(&args),
        Command::Generate(args) => generate::run(&args).map(|()| 0),
        Command::Bench(args) => bench::run(&args).map(|()| 0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
