//! The `sscov` command-line harness.

pub mod commands;
pub mod error;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{CliError, Result};

/// Seed used when neither the command line nor a config file sets one.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Parser, Debug)]
#[command(name = "sscov", version, about = "Special symmetric partitions and sample covariance spectra")]
pub struct Cli {
    /// Directory for artifacts.
    #[arg(long, global = true, env = "SSCOV_OUT", default_value = "sscov-out")]
    pub out: PathBuf,
    /// Seed for simulations (overrides the config file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for parallel stages (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify one partition (pair, even blocks, non-crossing, special symmetric).
    Classify(ClassifyArgs),
    /// Count special symmetric words of length 2k.
    Count(CountArgs),
    /// Exact circuit census of words.
    Census(CensusArgs),
    /// Limiting moments and related bounds.
    Moments(MomentsArgs),
    /// Monte Carlo spectra from a TOML ensemble description.
    Simulate(SimulateArgs),
    /// Hypergraph of a word, its inverse, or the counting tables.
    Hypergraph(HypergraphArgs),
    /// Run the cross-module identity suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Blocks as JSON, e.g. [[1,2,5,6],[3,4,7,8]].
    #[arg(long, conflicts_with = "word", required_unless_present = "word")]
    pub partition: Option<String>,
    /// Canonical word, e.g. aabbaabb.
    #[arg(long)]
    pub word: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupBy {
    Total,
    Blocks,
    EvenGenerating,
    BlocksAndEvenGenerating,
    BlockSizes,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = GroupBy::BlocksAndEvenGenerating)]
    pub by: GroupBy,
    /// Only words whose letters each occur twice.
    #[arg(long)]
    pub pair_matched: bool,
    /// Largest ground set enumerated.
    #[arg(long, default_value_t = sscov_core::partition::DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LinkArg {
    S,
    W,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Implied,
    Exact,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    /// Words to count (repeatable).
    #[arg(long = "word")]
    pub words: Vec<String>,
    /// Count every special symmetric word of length 2k.
    #[arg(long)]
    pub ss_words: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = LinkArg::S)]
    pub link: LinkArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Implied)]
    pub rule: RuleArg,
    /// Candidate-tuple budget per word.
    #[arg(long, default_value_t = sscov_core::census::DEFAULT_CENSUS_BUDGET)]
    pub budget: u128,
    /// Also check that every S-circuit is a Wigner circuit.
    #[arg(long)]
    pub containment: bool,
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    /// Orders: `3`, `1..6` or `1..=6`.
    #[arg(long, default_value = "1..4")]
    pub k: String,
    /// Aspect ratio p/n.
    #[arg(long, default_value_t = 1.0)]
    pub y: f64,
    /// Marchenko-Pastur sequence (C_2 = 1, higher zero).
    #[arg(long, group = "source")]
    pub mp: bool,
    /// Constant sequence, e.g. "2=1,4=3".
    #[arg(long, group = "source")]
    pub c: Option<String>,
    /// Sparse limit with C_{2m} = lambda; adds the Poisson sandwich bounds.
    #[arg(long, group = "source")]
    pub sparse: Option<f64>,
    /// Grid functions g_{2m} from CSV files, e.g. "2=g2.csv,4=g4.csv".
    #[arg(long, group = "source")]
    pub g_csv: Option<String>,
    /// Variance profile CSV; combine with --base.
    #[arg(long, group = "source", requires = "base")]
    pub sigma_csv: Option<PathBuf>,
    /// Base sequence for --sigma-csv, e.g. "2=1,4=0".
    #[arg(long)]
    pub base: Option<String>,
    /// Quadrature resolution for grid sources.
    #[arg(long, default_value_t = 64)]
    pub resolution: usize,
    /// Include the per-word breakdown (JSON output).
    #[arg(long)]
    pub breakdown: bool,
    /// Carleman partial sums up to this order, using the --c sequence as bounds.
    #[arg(long, requires = "c")]
    pub carleman: Option<usize>,
    /// Star-word lower bound `M:T` on the (M*T)-th moment.
    #[arg(long)]
    pub support_bound: Option<String>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// TOML ensemble description (top level or a [simulate] table).
    #[arg(long)]
    pub config: PathBuf,
    /// Also write a gnuplot script for the histogram.
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Args, Debug)]
pub struct HypergraphArgs {
    /// Build the hypergraph of this word.
    #[arg(long, conflicts_with_all = ["sigma", "k"])]
    pub word: Option<String>,
    /// Vertex partition as JSON; with --tau, recover the word.
    #[arg(long, requires = "tau", conflicts_with = "k")]
    pub sigma: Option<String>,
    #[arg(long, requires = "sigma")]
    pub tau: Option<String>,
    /// Emit class tables and the acyclic pair census for this k.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    pub max_k: usize,
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    let work = || commands::dispatch(cli);
    match cli.threads {
        Some(0) => Err(CliError::Config("--threads must be positive".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Other(e.to_string()))?
            .install(work),
        None => work(),
    }
}
