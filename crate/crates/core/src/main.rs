use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "zfscale",
    about = "Verification experiments for scaling limits of integrable 2d models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a JSON config file
    Run {
        /// Path to the experiment config
        config: PathBuf,
        /// Directory for result tables (default: current directory)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Multiply every tolerance by this factor
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ZFSCALE_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: ZFSCALE_THREADS must be a positive integer");
                return ExitCode::from(1);
            }
        }
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            tol_scale,
        } => ExitCode::from(zfscale::cli::run(&config, out.as_deref(), tol_scale) as u8),
    }
}
