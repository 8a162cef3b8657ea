use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};
use log::{error, info};
use weakval_cli::config::{parse_scenario, SweepParam};
use weakval_cli::error::CliError;
use weakval_cli::pipeline;

#[derive(Parser)]
#[command(name = "weakval", version, about = "Weak-value scenarios: series, symmetry and pointer reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the outputs listed in the scenario file.
    Run {
        scenario: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Recorded in the metadata; the pipeline is deterministic.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep one parameter and tabulate translations and pointer shifts.
    Sweep {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Comma separated values; defaults to the scenario's sweep list.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Classify a weak-value series read from CSV.
    Classify {
        series: PathBuf,
        #[arg(long)]
        t0: f64,
        #[arg(long, default_value_t = weakval_core::tolerances::DEFAULT_SYMMETRY)]
        tolerance: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn execute(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    match cli.command {
        Command::Run { scenario, out, seed } => {
            let config = parse_scenario(&scenario)?;
            pipeline::run(&config, &out, seed)
        }
        Command::Sweep {
            scenario,
            param,
            values,
            out,
        } => {
            let config = parse_scenario(&scenario)?;
            let values = match values {
                Some(v) => v,
                None => config
                    .sweeps
                    .get(param)
                    .ok_or_else(|| CliError::Invalid(format!("no values given for {}", param.as_str())))?
                    .to_vec(),
            };
            pipeline::sweep(&config, param, &values, &out)
        }
        Command::Classify {
            series,
            t0,
            tolerance,
            out,
        } => pipeline::classify_file(&series, t0, tolerance, &out),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(files) => {
            for f in files {
                info!("wrote {}", f.display());
                println!("{}", f.display());
            }
        }
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            exit(e.exit_code());
        }
    }
}
