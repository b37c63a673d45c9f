//! `qcomp`: measures, relation checks, sweeps and separable approximations for small qubit systems.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use complementarity::relations::Tolerances;

use commands::{CliError, CliResult, Format, Output, RunConfig, VerifySource};

#[derive(Parser)]
#[command(name = "qcomp", version, about = "Complementarity measures and relation checks for qubit states")]
struct Cli {
    /// Base seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Uniform tolerance replacing the default identity and spectral tolerances.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads. Output does not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every scalar measure of one state.
    Measure {
        /// Family spec such as `werner:0.5` or `ghz:3`.
        #[arg(long, conflicts_with = "file")]
        family: Option<String>,
        /// State JSON file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Also estimate the convex-roof tangle.
        #[arg(long)]
        convex_roof: bool,
        /// Restarts for the convex-roof optimizer.
        #[arg(long, default_value_t = 32)]
        budget: usize,
    },
    /// Check the relations that apply to one or many states.
    Verify {
        /// Family spec, or `werner`/`mems` together with `--grid`.
        #[arg(long, conflicts_with_all = ["file", "random_pure", "random_mixed"])]
        family: Option<String>,
        /// Grid step for a family sweep.
        #[arg(long, requires = "family")]
        grid: Option<f64>,
        #[arg(long, conflicts_with_all = ["random_pure", "random_mixed"])]
        file: Option<PathBuf>,
        /// Qubit count for random pure states.
        #[arg(long, value_name = "N", conflicts_with = "random_mixed")]
        random_pure: Option<usize>,
        /// Qubit count for random mixed states.
        #[arg(long, value_name = "N")]
        random_mixed: Option<usize>,
        /// Rank of random mixed states (full rank by default).
        #[arg(long, requires = "random_mixed")]
        rank: Option<usize>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Keep only these relation ids (a prefix matches its sub-ids).
        #[arg(long)]
        relation: Vec<String>,
    },
    /// Measures along a Werner or MEMS parameter grid.
    Sweep {
        #[arg(value_parser = ["werner", "mems"])]
        family: String,
        #[arg(long, default_value_t = 0.05)]
        grid: f64,
    },
    /// Random states with measures and relation residuals.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, conflicts_with = "pure")]
        rank: Option<usize>,
        #[arg(long)]
        pure: bool,
    },
    /// Best separable approximation of a two-qubit state.
    Bsa {
        #[arg(long, conflicts_with = "file")]
        family: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Random restarts for the optimizer.
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
}

fn run(cli: Cli) -> CliResult<Output> {
    let tolerances = match cli.tol {
        Some(t) => Tolerances::uniform(t)?,
        None => Tolerances::default(),
    };
    let cfg = RunConfig { seed: cli.seed, tolerances, format: cli.format };
    match cli.command {
        Command::Measure { family, file, convex_roof, budget } => {
            let source = commands::single_source(family.as_deref(), file.as_ref())?;
            commands::measure(&cfg, source, convex_roof.then_some(budget))
        }
        Command::Verify { family, grid, file, random_pure, random_mixed, rank, count, relation } => {
            let source = match (family, grid, file, random_pure, random_mixed) {
                (Some(f), Some(step), ..) => VerifySource::Grid { family: f, step },
                (Some(f), None, ..) => VerifySource::Family(f),
                (None, _, Some(path), ..) => VerifySource::File(path),
                (None, _, None, Some(n), _) => VerifySource::RandomPure { n, count },
                (None, _, None, None, Some(n)) => VerifySource::RandomMixed { n, rank, count },
                _ => {
                    return Err(CliError::Input(
                        "give one of --family, --file, --random-pure or --random-mixed".into(),
                    ))
                }
            };
            commands::verify(&cfg, source, &relation)
        }
        Command::Sweep { family, grid } => commands::sweep(&cfg, &family, grid),
        Command::Sample { n, count, rank, pure } => {
            let rank = if pure { None } else { Some(rank.unwrap_or(1 << n.min(16))) };
            commands::sample(&cfg, n, count, rank)
        }
        Command::Bsa { family, file, budget } => {
            let source = commands::single_source(family.as_deref(), file.as_ref())?;
            commands::bsa(&cfg, source, budget)
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers == 0 {
        eprintln!("error: --workers must be at least 1");
        return ExitCode::from(2);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = cli.out.clone();
    let result = pool.install(|| run(cli)).and_then(|o| emit(&o.text, out.as_ref()).map(|_| o.pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
