//! Command-line frontend: knowledge-base files, subcommands and report emitters.

pub mod commands;
pub mod kb;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ipw_core::policy::PolicyTag;

pub use kb::{load_kb, parse_kb, Diagnostic, KbError, KnowledgeBase};
pub use report::Format;

#[derive(Debug, Parser)]
#[command(name = "ipw", version, about = "Belief values over possible worlds")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report belief values for statements under a policy
    Eval(EvalArgs),
    /// Sharpest derivable interval for a conditional probability
    Bounds(BoundsArgs),
    /// Envelope of the expert assessments in a knowledge base
    Merge(MergeArgs),
    /// Extensions of the default theory, optionally with an irrelevance audit
    Extensions(ExtensionsArgs),
    /// Belief in the target of a growing causal chain
    Laplace(LaplaceArgs),
    /// Accuracy/reliability trade-off for known marginals
    Table1(Table1Args),
    /// Seeded Monte Carlo calibration experiments
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub kb: PathBuf,
    /// ratio, reliable or point
    #[arg(long, default_value = "ratio")]
    pub policy: PolicyTag,
    #[arg(long = "query", required = true)]
    pub queries: Vec<String>,
    /// Floating-point instead of exact rational arithmetic
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long)]
    pub query: String,
    #[arg(long, default_value = "true")]
    pub given: String,
    /// Floating-point instead of exact rational arithmetic
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    #[arg(long)]
    pub kb: PathBuf,
    /// Statements to bound under the merged envelope
    #[arg(long = "query")]
    pub queries: Vec<String>,
    /// Floating-point instead of exact rational arithmetic
    #[arg(long)]
    pub float: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Standard,
    Introspective,
}

#[derive(Debug, Args)]
pub struct ExtensionsArgs {
    #[arg(long)]
    pub kb: PathBuf,
    /// Audit every default for provable irrelevance
    #[arg(long)]
    pub audit: bool,
    #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0.9)]
    pub tau_justify: f64,
    #[arg(long, default_value_t = 0.9)]
    pub tau_believe: f64,
}

#[derive(Debug, Args)]
pub struct LaplaceArgs {
    #[arg(long)]
    pub observations: usize,
    /// Unrelated atoms added to the vocabulary
    #[arg(long, default_value_t = 0)]
    pub free_atoms: usize,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Take the marginals from the point constraints of a knowledge base
    /// instead of p(a) = 0.8, p(b) = 0.6
    #[arg(long)]
    pub kb: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    TwoExperts,
    ReliabilityAudit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartitionArg {
    None,
    SingleMarginal,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub scenario: Scenario,
    /// Defaults to 100000 for two-experts and 10000 for reliability-audit
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    /// Bins with fewer samples are left out of the calibration error
    #[arg(long, default_value_t = 30)]
    pub min_bin_count: u64,
    /// Run trials on one thread (results are identical)
    #[arg(long)]
    pub sequential: bool,

    /// two-experts: accuracy of expert 1's signal
    #[arg(long, default_value_t = 0.9)]
    pub quality1: f64,
    /// two-experts: accuracy of expert 2's own signal
    #[arg(long, default_value_t = 0.7)]
    pub quality2: f64,
    /// two-experts: probability expert 2 copies expert 1's signal
    #[arg(long, default_value_t = 0.0)]
    pub redundancy: f64,
    /// two-experts: prior probability of the event
    #[arg(long, default_value_t = 0.5)]
    pub base_rate: f64,

    /// reliability-audit: vocabulary size (1 to 4)
    #[arg(long, default_value_t = 4)]
    pub atoms: usize,
    /// reliability-audit: inclusion probability of each random clause axiom
    #[arg(long, default_value_t = 0.5)]
    pub axiom_density: f64,
    /// reliability-audit: partition handed to the reliable policy
    #[arg(long, value_enum, default_value_t = PartitionArg::SingleMarginal)]
    pub partition: PartitionArg,
}

/// Why a command failed, and which exit code that maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unparsable input: exit 2.
    Usage(String),
    /// Well-formed input the theory rejects: exit 1.
    Domain(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let format = cli.format;
    let result = match cli.command {
        Command::Eval(a) => commands::eval(&a, format, out),
        Command::Bounds(a) => commands::bounds(&a, format, out),
        Command::Merge(a) => commands::merge(&a, format, out),
        Command::Extensions(a) => commands::extensions(&a, format, out),
        Command::Laplace(a) => commands::laplace(&a, format, out),
        Command::Table1(a) => commands::table1(&a, format, out),
        Command::Simulate(a) => commands::simulate(&a, format, out),
    };
    match result {
        Ok(()) => 0,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.exit_code()
        }
    }
}
