use std::path::PathBuf;

use beamcluster_cli::commands::{cmd_compare, cmd_eval, cmd_generate, cmd_train};
use beamcluster_cli::config::ConfigFlags;
use beamcluster_cli::error::{exit_code, CliResult};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "beamcluster",
    version,
    about = "Learn beam codebooks from simulated channels and compare them against uniform baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a seeded channel dataset and write it to the output directory.
    Generate {
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Fit a clustered codebook to a dataset; writes both codebooks and a log.
    Train {
        /// Dataset file produced by `generate`.
        dataset: PathBuf,
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Sweep one codebook file over the SNR grid by Monte Carlo.
    Eval {
        /// Codebook file produced by `train`.
        codebook: PathBuf,
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Full pipeline: generate, train, evaluate both codebooks, summarize.
    Compare {
        #[command(flatten)]
        flags: ConfigFlags,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate { flags } => {
            let config = flags.resolve()?;
            let out = cmd_generate(&config)?;
            println!("wrote {}", out.dataset_path.display());
            println!("{}", out.summary);
        }
        Command::Train { dataset, flags } => {
            let config = flags.resolve()?;
            let out = cmd_train(&dataset, &config)?;
            println!("wrote {}", out.clustered_path.display());
            println!("wrote {}", out.uniform_path.display());
            println!("wrote {}", out.log_path.display());
            println!(
                "iterations={} converged={} sum-distance clustered={:.6} uniform={:.6}",
                out.iterations, out.converged, out.clustered_sum, out.uniform_sum
            );
        }
        Command::Eval { codebook, flags } => {
            let config = flags.resolve()?;
            let out = cmd_eval(&codebook, &config)?;
            println!("wrote {}", out.csv_path.display());
        }
        Command::Compare { flags } => {
            let config = flags.resolve()?;
            let out = cmd_compare(&config)?;
            println!("wrote {}", out.clustered_path.display());
            println!("wrote {}", out.uniform_path.display());
            println!("wrote {}", out.log_path.display());
            println!("wrote {}", out.csv_path.display());
            println!("wrote {}", out.summary_path.display());
            for row in &out.rows {
                println!(
                    "snr {:>6.1} dB  gap {:+.4} bit/s/Hz",
                    row.snr_db, row.gap
                );
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err.source));
    }
}
