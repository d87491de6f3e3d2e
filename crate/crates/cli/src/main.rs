use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gcdvsms::benchmarks::BenchmarkFunction;
use gcdvsms_harness::{
    parse_seeds, read_results, render_table, run_experiment, summarize, ExperimentConfig, HarnessError,
};

#[derive(Parser)]
#[command(name = "gcdvsms", version, about = "Benchmark runner for simplex-block optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded experiment and write one result row per seed and algorithm.
    Run(RunArgs),
    /// Print a summary table of a results file.
    Summarize { results: PathBuf },
    /// List the available benchmark functions.
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    /// TOML experiment config; flags below override its keys.
    config: Option<PathBuf>,
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated list (`1,2,3`) or half-open range (`0..100`).
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    variant: Option<String>,
    /// Write a per-iteration trace file for every seed.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of seeds to run concurrently.
    #[arg(long)]
    parallel: Option<usize>,
    /// Also run a budget-matched baseline (`random_search`).
    #[arg(long)]
    baseline: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Run(args) => {
            let config = build_config(args)?;
            let rows = run_experiment(&config)?;
            print!("{}", render_table(&summarize(&rows)?));
            eprintln!("wrote {} rows to {}", rows.len(), config.output_path.display());
        }
        Command::Summarize { results } => {
            let rows = read_results(&results)?;
            print!("{}", render_table(&summarize(&rows)?));
        }
        Command::List => {
            println!("{:<10} {:>18}  minimum", "name", "default box");
            for f in BenchmarkFunction::ALL {
                let (l, u) = f.default_bounds();
                println!("{:<10} {:>18}  0 at the origin", f.name(), format!("[{l}, {u}]^d"));
            }
        }
    }
    Ok(())
}

fn build_config(args: RunArgs) -> Result<ExperimentConfig, HarnessError> {
    let mut table = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => toml::Table::new(),
    };
    let mut set = |key: &str, value: toml::Value| {
        table.insert(key.to_string(), value);
    };
    if let Some(f) = args.function {
        set("function", toml::Value::String(f));
    }
    if let Some(n) = args.n {
        set("n", toml::Value::Integer(n as i64));
    }
    if let Some(d) = args.d {
        set("d", toml::Value::Integer(d as i64));
    }
    if let Some(seeds) = args.seeds {
        set("seeds", parse_seeds(&seeds)?.to_toml());
    }
    if let Some(v) = args.variant {
        set("variant", toml::Value::String(v));
    }
    if args.trace {
        set("trace", toml::Value::Boolean(true));
    }
    if let Some(out) = args.out {
        set("output_path", toml::Value::String(out.to_string_lossy().into_owned()));
    }
    if let Some(p) = args.parallel {
        set("parallel_starts", toml::Value::Integer(p as i64));
    }
    if let Some(b) = args.baseline {
        set("baseline", toml::Value::String(b));
    }
    ExperimentConfig::from_table(table)
}
