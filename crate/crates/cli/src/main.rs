use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mwlocal_core::experiment::{run, ExperimentConfig, Mode, EXIT_FAILURE};
use mwlocal_core::order::fixtures;

/// Reduction scans for subgroup membership on elliptic curves, and
/// verification suites for orders and their modules.
#[derive(Parser)]
#[command(name = "mwlocal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether red_p x lies in red_p Sigma at every good prime of a window.
    Gajda(RunArgs),
    /// Compare the orders of red_p x and red_p y at every good prime.
    Support(RunArgs),
    /// Run the inclusion, pre-basis, CRT and obstruction suites on fixtures.
    Algebra(RunArgs),
    /// Print a built-in order as JSON, or list the names.
    Fixture { name: Option<String> },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// JSON-lines report; overrides `output_path` in the config. Without
    /// either, the report goes to stdout and the table to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn run_mode(mode: Mode, args: RunArgs) -> Result<i32> {
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    if cfg.mode != mode {
        bail!("config {} is for mode {:?}", args.config.display(), cfg.mode);
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .context("building thread pool")?;
    let report = pool.install(|| run(&cfg))?;
    let lines = report.to_json_lines();
    let table = report.human_table();
    match args.out.or(cfg.output_path.clone()) {
        Some(path) => {
            std::fs::write(&path, lines).with_context(|| format!("writing {}", path.display()))?;
            print!("{table}");
        }
        None => {
            print!("{lines}");
            eprint!("{table}");
        }
    }
    std::io::stdout().flush()?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gajda(a) => run_mode(Mode::Gajda, a),
        Command::Support(a) => run_mode(Mode::Support, a),
        Command::Algebra(a) => run_mode(Mode::Algebra, a),
        Command::Fixture { name: None } => {
            fixtures::NAMES.iter().for_each(|n| println!("{n}"));
            Ok(0)
        }
        Command::Fixture { name: Some(name) } => match fixtures::by_name(&name) {
            Some(o) => serde_json::to_string_pretty(&o)
                .map(|s| {
                    println!("{s}");
                    0
                })
                .map_err(Into::into),
            None => Err(anyhow::anyhow!("unknown fixture {name:?}; known: {}", fixtures::NAMES.join(", "))),
        },
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILURE as u8)
        }
    }
}
