//! Command-line entry point: graph generation, single solves, benchmark
//! campaigns, the resource-cost protocol, oracle queries and report
//! rendering. Exit codes: 0 ok, 1 usage, 2 config, 3 runtime.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;

use ama_core::bench::{Algorithm, ExperimentConfig, GraphFamily};
use clap::{Args, Parser, Subcommand};

use config::FileConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<ama_core::Error> for CliError {
    fn from(e: ama_core::Error) -> Self {
        use ama_core::Error::*;
        match e {
            InvalidConfig { .. }
            | InstanceTooLarge { .. }
            | StateTooLarge { .. }
            | InfeasibleDegreeSequence { .. } => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "ama",
    version,
    about = "Feasibility-preserving QAOA+ simulation and adaptive mixer allocation for maximum independent set"
)]
struct Cli {
    /// Worker threads for parallel runs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded graph instances as edge-list files.
    Gen(GenArgs),
    /// Optimize one graph with one algorithm and report the outcome.
    Solve(SolveArgs),
    /// Run a benchmark campaign and write metrics plus plot data.
    Bench(BenchArgs),
    /// Estimate expected resources to reach target approximation ratios.
    OarCost(OarCostArgs),
    /// Print the exact maximum independent sets of a graph file.
    Oracle(OracleArgs),
    /// Render a results JSON file as a table and plot data.
    Report(ReportArgs),
}

#[derive(Args)]
pub struct GenArgs {
    /// Graph family: er or regular-3.
    #[arg(long)]
    family: String,
    /// Vertex count.
    #[arg(long)]
    n: usize,
    /// Number of instances.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Seed of the first instance; instance k uses seed + k.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability for the er family.
    #[arg(long, default_value_t = 0.5)]
    er_edge_prob: f64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Edge-list graph file.
    graph: PathBuf,
    /// Algorithm: ama, qaoa_plus, pu or pnu.
    #[arg(long)]
    algo: String,
    /// Layer depth; required for baselines, not applicable to ama.
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// TOML config for optimizer / adaptive / resource settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write the full report (including any adaptive trace) as JSON.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Echo the fully-resolved config before running.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
pub struct CampaignArgs {
    /// TOML config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override runs per setting.
    #[arg(long)]
    runs: Option<usize>,
    /// Override graphs per size.
    #[arg(long)]
    graphs: Option<usize>,
    /// Override graph sizes, comma-separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Override algorithms, comma-separated.
    #[arg(long, value_delimiter = ',')]
    algos: Option<Vec<String>>,
    /// Override baseline depths, comma-separated.
    #[arg(long, value_delimiter = ',')]
    depths: Option<Vec<usize>>,
    /// Override the graph family.
    #[arg(long)]
    family: Option<String>,
    /// Echo the fully-resolved config before running.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args)]
pub struct BenchArgs {
    #[command(flatten)]
    common: CampaignArgs,
}

#[derive(Args)]
pub struct OarCostArgs {
    #[command(flatten)]
    common: CampaignArgs,
    /// Target OARs, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "0.7,0.8,0.9")]
    targets: Vec<f64>,
}

#[derive(Args)]
pub struct OracleArgs {
    /// Edge-list graph file.
    graph: PathBuf,
}

#[derive(Args)]
pub struct ReportArgs {
    /// Campaign results as JSON (bench writes results.json).
    #[arg(long)]
    input: PathBuf,
    /// Where to write per-metric plot data.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Loads the config file, applies flag overrides, validates, and optionally
/// echoes the result.
pub fn load_campaign_config(args: &CampaignArgs) -> CliResult<(FileConfig, ExperimentConfig)> {
    let mut fc = FileConfig::load(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        fc.experiment.master_seed = seed;
    }
    if let Some(runs) = args.runs {
        fc.experiment.runs_per_setting = runs;
    }
    if let Some(graphs) = args.graphs {
        fc.experiment.graphs_per_size = graphs;
    }
    if let Some(sizes) = &args.sizes {
        fc.experiment.sizes = sizes.clone();
    }
    if let Some(algos) = &args.algos {
        fc.experiment.algorithms = algos
            .iter()
            .map(|a| Algorithm::parse(a).map_err(|e| CliError::Usage(e.to_string())))
            .collect::<CliResult<Vec<_>>>()?;
    }
    if let Some(depths) = &args.depths {
        fc.experiment.depths = depths.clone();
    }
    if let Some(family) = &args.family {
        fc.experiment.graph_family =
            GraphFamily::parse(family).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    fc.normalize();
    let cfg = fc.resolve();
    cfg.validate()?;
    if args.print_config {
        print!("{}", fc.to_toml()?);
    }
    Ok((fc, cfg))
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen(args) => commands::cmd_gen(args),
        Command::Solve(args) => commands::cmd_solve(args),
        Command::Bench(args) => commands::cmd_bench(args),
        Command::OarCost(args) => commands::cmd_oar_cost(args),
        Command::Oracle(args) => commands::cmd_oracle(args),
        Command::Report(args) => commands::cmd_report(args),
    }
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("usage error: --jobs must be >= 1");
            return 1;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot configure {jobs} worker threads: {e}");
            return 3;
        }
    }
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn main() {
    // Die quietly when a downstream pipe (e.g. `| head`) closes early
    // instead of panicking on the broken-pipe write error.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(real_main());
}
