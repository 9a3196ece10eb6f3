//! Command-line front door for the hypergraph toolkit.
//!
//! Five subcommands cover the full loop: `generate` runs the two-phase
//! agent pipeline, `simulate` runs the rank-driven attachment process
//! directly, `measure` profiles one hypergraph, `compare` scores a
//! generated hypergraph against a reference, and `sweep` maps the
//! comparison score over a parameter grid.
//!
//! Exit codes: 0 on success, 1 when the invocation is wrong (unknown
//! flag, bad value, missing input file), 2 when a valid invocation
//! fails at runtime.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use hyperllm_core::engine::BackendKind;

mod commands;
pub mod plot;

#[derive(Debug, Parser)]
#[command(
    name = "hyperllm",
    version,
    about = "Generate, simulate, measure, compare, and sweep temporal hypergraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a hypergraph with the two-phase agent pipeline
    Generate(GenerateArgs),
    /// Run the rank-driven attachment process and verify its tail
    Simulate(SimulateArgs),
    /// Profile the structural and temporal patterns of one hypergraph
    Measure(MeasureArgs),
    /// Score a generated hypergraph against a reference
    Compare(CompareArgs),
    /// Map the comparison score over an attachment/suggestion grid
    Sweep(SweepArgs),
}

impl Command {
    fn dispatch(&self) -> Result<(), CliError> {
        match self {
            Command::Generate(args) => commands::generate(args),
            Command::Simulate(args) => commands::simulate_cmd(args),
            Command::Measure(args) => commands::measure(args),
            Command::Compare(args) => commands::compare(args),
            Command::Sweep(args) => commands::sweep(args),
        }
    }
}

fn parse_backend(s: &str) -> Result<BackendKind, String> {
    s.parse()
}

/// Flags every subcommand accepts.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Directory all outputs are written under
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub output: PathBuf,

    /// Random seed, overriding the config file's
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,

    /// Config file of key = value lines, overriding the defaults
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Decision backend, overriding the config file's
    #[arg(long, value_name = "KIND", value_parser = parse_backend)]
    pub backend: Option<BackendKind>,

    /// Chat-completions service root (remote backend)
    #[arg(long, value_name = "URL", default_value = "https://api.openai.com")]
    pub base_url: String,

    /// Model name requested from the service (remote backend)
    #[arg(long, value_name = "NAME", default_value = "gpt-4o-mini")]
    pub model: String,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Entity profiles CSV; synthesized from the config's domain when absent
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Population size (defaults to the config's num_nodes)
    #[arg(long, value_name = "N")]
    pub nodes: Option<usize>,

    /// Hyperedges to draw (defaults to the config's target_edges)
    #[arg(long, value_name = "M")]
    pub edges: Option<usize>,

    /// Rank offset, at least 0 (defaults to the config's alpha)
    #[arg(long, value_name = "A")]
    pub alpha: Option<f64>,

    /// Rank exponent, above 0 (defaults to the config's exponent_gamma)
    #[arg(long, value_name = "G")]
    pub gamma: Option<f64>,

    /// Fixed hyperedge size, at least 2 (defaults to the config's min_size)
    #[arg(long, value_name = "K")]
    pub size: Option<usize>,

    /// Quality cutoff in [0, 1) (defaults to the config's q_threshold)
    #[arg(long, value_name = "Q")]
    pub q_threshold: Option<f64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Hypergraph to profile (HGT)
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Reference hypergraph (HGT)
    #[arg(value_name = "REFERENCE")]
    pub reference: PathBuf,

    /// Generated hypergraph (HGT)
    #[arg(value_name = "GENERATED")]
    pub generated: PathBuf,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Attach probabilities to sweep, comma separated
    #[arg(
        long = "p-values",
        value_name = "P,..",
        value_delimiter = ',',
        default_values_t = [0.55, 0.65, 0.75, 0.85]
    )]
    pub p_values: Vec<f64>,

    /// Optimizer suggestion counts to sweep, comma separated
    #[arg(
        long = "k-values",
        value_name = "K,..",
        value_delimiter = ',',
        default_values_t = [1, 3, 5, 10]
    )]
    pub k_values: Vec<usize>,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Failures split by whose they are: bad invocations exit 1, runs that
/// fail exit 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub(crate) fn runtime(err: anyhow::Error) -> CliError {
    CliError::Runtime(err)
}

/// Parses `argv` and runs the chosen command, returning the process
/// exit code. Diagnostics go to stderr; `--help`/`--version` go to
/// stdout and exit 0.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = i32::from(e.use_stderr());
            let _ = e.print();
            return code;
        }
    };
    match cli.command.dispatch() {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Runtime(err)) => {
            eprintln!("error: {err:#}");
            2
        }
    }
}
