mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CliError, ConstructionName};

/// Bounds and simulations for the decoding failure probability of Raptor
/// codes under ML erasure decoding.
#[derive(Parser, Debug)]
#[command(name = "raptor-bounds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for the parallel loops.
    #[arg(long, global = true, env = "RAPTOR_BOUNDS_THREADS")]
    threads: Option<usize>,

    /// Output file; stdout when omitted.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Upper and lower bounds on the failure probability.
    Bound(BoundArgs),
    /// Monte Carlo estimate of the failure probability.
    Simulate(SimulateArgs),
    /// Exact enumerators of an outer code or ensemble.
    Enumerate(EnumerateArgs),
    /// Error-exponent lower bound and ML threshold.
    Errexp(ErrexpArgs),
    /// Exact failure probability for tiny instances.
    Oracle(OracleArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field order q, or p^m.
    #[arg(long, default_value = "2")]
    pub field: String,

    /// Modulus polynomial for extension fields, as an integer (0x.. accepted).
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    #[arg(long, value_enum, default_value = "gfq")]
    pub construction: ConstructionName,

    #[command(flatten)]
    pub field: FieldArgs,

    /// hamming:t, uniform-pc:h:k, ldpc:dv:dc:h or file:path.
    #[arg(long)]
    pub outer: String,

    /// Size hA of the first class of intermediate symbols.
    #[arg(long)]
    pub split: Option<usize>,

    /// Degree distribution: r10, rq-met, or a file.
    #[arg(long, default_value = "r10")]
    pub dist: String,

    /// Allow mass on (0,1) and (1,0) in a bivariate distribution.
    #[arg(long)]
    pub relax_bivariate: bool,

    /// Fold degrees that exceed the available positions into the largest one.
    #[arg(long)]
    pub fold_degrees: bool,

    /// Overheads: start:stop:step (inclusive), a comma list, or one value.
    #[arg(long, default_value = "0:20:1")]
    pub delta: String,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub code: CodeArgs,

    /// Compute the upper bound only.
    #[arg(long)]
    pub no_lower_bounds: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub code: CodeArgs,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Stop a δ once this many failures are seen; 0 disables the rule.
    #[arg(long, default_value_t = 100)]
    pub target_failures: u64,

    #[arg(long, default_value_t = 1_000_000)]
    pub max_trials: u64,

    /// Codes drawn from an outer ensemble.
    #[arg(long, default_value_t = 500)]
    pub codes: usize,

    #[arg(long, default_value_t = 200)]
    pub trials_per_code: u64,

    /// Confidence level of the reported intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum KindName {
    Weight,
    Composition,
    BivariateWeight,
    BivariateComposition,
    Biweight,
    Bicomposition,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub field: FieldArgs,

    /// hamming:t, uniform-pc:h:k, ldpc:dv:dc:h or file:path.
    #[arg(long)]
    pub outer: String,

    #[arg(long, value_enum, default_value = "weight")]
    pub kind: KindName,

    /// Size hA of the first part, for the bivariate kinds.
    #[arg(long)]
    pub split: Option<usize>,

    /// Write the generator matrix of the code (sampled for ensembles).
    #[arg(long)]
    pub dump_code: Option<PathBuf>,

    /// Seed for sampling a code from an ensemble.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ErrexpArgs {
    /// Outer code rate.
    #[arg(long)]
    pub rate: f64,

    #[command(flatten)]
    pub field: FieldArgs,

    #[arg(long, default_value = "r10")]
    pub dist: String,

    /// pi_limit or paper_varrho.
    #[arg(long, default_value = "pi_limit")]
    pub kernel: String,

    /// Reception overheads ε: start:stop:step or a comma list.
    #[arg(long, default_value = "0:0.1:0.005")]
    pub epsilon: String,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub code: CodeArgs,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::config("--threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }
    let text = match &cli.command {
        Command::Bound(a) => commands::bound(a)?,
        Command::Simulate(a) => commands::simulate(a)?,
        Command::Enumerate(a) => commands::enumerate(a)?,
        Command::Errexp(a) => commands::errexp(a)?,
        Command::Oracle(a) => commands::oracle(a)?,
    };
    output::emit(cli.output.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("raptor-bounds: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
