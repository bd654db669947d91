use clap::{Parser, Subcommand};
use pinchlab::cli::{self, verify::Fault};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pinchlab", version, about = "Mean curvature flow with inscribed and outer radius monitors")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flow one configured scenario and evaluate every monitor.
    Run { config: PathBuf },
    /// Run the Cartesian grid of a sweep configuration.
    Sweep { config: PathBuf },
    /// Run the acceptance suite.
    Verify {
        /// Criteria to run, e.g. C2 (default: all).
        #[arg(long = "only")]
        only: Vec<String>,
        /// Inject a defect: sign-flip or dt-double.
        #[arg(long, default_value = "none")]
        inject: Fault,
    },
    /// Recompute the monitors of a run directory from its frames.
    Analyze { run_dir: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let result = match args.command {
        Command::Run { config } => cli::cmd_run(&config),
        Command::Sweep { config } => cli::cmd_sweep(&config),
        Command::Verify { only, inject } => Ok(cli::cmd_verify(&only, inject)),
        Command::Analyze { run_dir } => cli::cmd_analyze(&run_dir),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::EXIT_ERROR as u8)
        }
    }
}
