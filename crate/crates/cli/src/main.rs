use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rigid_galois_cli::commands::{self, summarize_analysis, summarize_mqdeg, summarize_sample};
use rigid_galois_cli::config::{self, RunConfig, SEED_ENV};
use rigid_galois_cli::{CliError, EXIT_CODES};
use serde::Serialize;

const EXIT_HELP: &str = "Exit codes:
  0  success
  2  usage error or invalid argument
  3  file could not be read or written
  4  graph file could not be parsed
  5  graph is not a Laman graph
  6  graph is Laman but not Henneberg-1 constructible
  7  labelling could not be certified generic
  8  integer too hard to factor
  9  sampler saw a real count outside the predicted spectrum
  10 internal inconsistency";

/// Exact Galois groups of Henneberg-1 constructible rigid graphs.
#[derive(Parser)]
#[command(name = "rigid-galois", version, after_help = EXIT_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list (`u v` per line, optional `base: u v`) or JSON graph file.
    graph: PathBuf,
    /// Base edge to pin at (0,0)-(1,0).
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    base: Option<Vec<u32>>,
    /// Labelling seed.
    #[arg(long, env = SEED_ENV, default_value_t = config::DEFAULT_SEED)]
    seed: u64,
    /// Labels are p/q with p, q in 1..=RANGE.
    #[arg(long, default_value_t = config::DEFAULT_RANGE)]
    range: u32,
}

#[derive(Args)]
struct OutputArgs {
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to a file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute and analyze the Galois group.
    Analyze {
        #[command(flatten)]
        graph: GraphArgs,
        /// Largest group enumerated element by element.
        #[arg(long, default_value_t = config::DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count real realizations under random real labellings.
    Sample {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = config::DEFAULT_TRIALS)]
        trials: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Degree of Q(sqrt a1, ..., sqrt ak) over Q.
    Mqdeg {
        /// Nonzero integers or fractions p/q.
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump certified numeric coordinates of every realization as JSON.
    Realize {
        #[command(flatten)]
        graph: GraphArgs,
        /// Radius bound for every printed value.
        #[arg(long, default_value_t = config::DEFAULT_PRECISION)]
        precision: f64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn config_from(args: &GraphArgs) -> RunConfig {
    let mut cfg = RunConfig::new(&args.graph);
    cfg.base = args.base.as_ref().map(|b| (b[0], b[1]));
    cfg.seed = args.seed;
    cfg.range = args.range;
    cfg
}

fn emit<T: Serialize>(value: &T, summary: &str, output: &OutputArgs) -> Result<()> {
    let json = serde_json::to_string_pretty(value).context("serializing report")?;
    if let Some(path) = &output.out {
        std::fs::write(path, format!("{json}\n")).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    if output.json {
        println!("{json}");
    } else {
        print!("{summary}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { graph, cap, output } => {
            let mut cfg = config_from(&graph);
            cfg.cap = cap;
            let analysis = commands::analyze(&cfg)?;
            emit(&analysis.report, &summarize_analysis(&analysis.report), &output)
        }
        Command::Sample { graph, trials, output } => {
            let mut cfg = config_from(&graph);
            cfg.trials = trials;
            let out = commands::sample(&cfg)?;
            emit(&out, &summarize_sample(&out), &output)?;
            match out.report.violations.len() {
                0 => Ok(()),
                n => Err(CliError::SamplerViolations(n).into()),
            }
        }
        Command::Mqdeg { values, output } => {
            let report = commands::mqdeg(&values)?;
            emit(&report, &summarize_mqdeg(&report), &output)
        }
        Command::Realize { graph, precision, out } => {
            let mut cfg = config_from(&graph);
            cfg.precision = precision;
            let dump = commands::realize(&cfg)?;
            let output = OutputArgs {
                json: out.is_none(),
                out,
            };
            emit(&dump, "", &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<CliError>().map_or(10, CliError::exit_code);
            debug_assert!(EXIT_CODES.iter().any(|(c, _)| *c == code));
            ExitCode::from(code as u8)
        }
    }
}
